#pragma once

#include "slrecon/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace slrecon {

// Ordered data set S = {x_1, ..., x_N} in R^2 or R^3.
class PointSet {
public:
    PointSet() = default;
    PointSet(int dim, std::vector<Vec> points);

    int dim() const { return dim_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }

    const Vec& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<Vec>& points() const { return points_; }

    auto begin() const { return points_.begin(); }
    auto end() const { return points_.end(); }

    Vec centroid() const;
    Box bounding_box() const;

    bool operator==(const PointSet& other) const;

private:
    int dim_ = 0;
    std::vector<Vec> points_;
};

class ParseError : public Error {
public:
    using Error::Error;
};

// Reads whitespace separated coordinates, one point per line. Blank lines and
// lines starting with '#' are skipped, extra columns are ignored, and OBJ style
// "v x y z" vertex lines are accepted.
PointSet load_points(const std::filesystem::path& path, int dim);

// Writes one point per line with round-trip precision.
void save_points(const PointSet& ps, const std::filesystem::path& path);

enum class Shape { Heart2D, Heart3D, Cubes3D };

Shape parse_shape(const std::string& name);
std::string shape_name(Shape shape);
int shape_dim(Shape shape);

struct ShapeRequest {
    Shape shape = Shape::Heart2D;
    std::size_t count = 24;
    std::uint64_t seed = 1;
    // Half-width of the box [-fit, fit]^n the shape is scaled into.
    double fit = 1.5;
};

PointSet generate_shape(const ShapeRequest& request);

// Implicit / parametric definitions of the synthetic shapes, in the unscaled
// frame the generators sample from. Exposed so tests can verify samples.
namespace shapes {

Vec heart2d_curve(double t);
double heart3d_implicit(const Vec& p);
// Signed-distance-like value for the union of the two rotated cubes; zero on
// the union's boundary, negative inside.
double cubes_union_value(const Vec& p);

// Affine map between the raw shape frame and the scaled output frame.
struct Fit {
    Vec center;
    double scale = 1.0;
    Vec to_output(const Vec& raw) const { return (raw - center) * scale; }
    Vec to_raw(const Vec& out) const { return out / scale + center; }
};

Fit heart2d_fit(double fit);
Fit heart3d_fit(double fit);
Fit cubes_fit(double fit);

} // namespace shapes

// Adds an independent uniform draw from [-eta, eta] to each coordinate.
PointSet perturb(const PointSet& ps, double eta, std::uint64_t seed);

// Keeps every stride-th point starting with the first.
PointSet subsample_stride(const PointSet& ps, std::size_t stride);

} // namespace slrecon
