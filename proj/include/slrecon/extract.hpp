#pragma once

#include "slrecon/distance_field.hpp"
#include "slrecon/rbf.hpp"

#include <array>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace slrecon {

// Zero-level curves. Closed loops do not repeat their first vertex; chains
// clipped by the sampling box are kept with closed = false.
struct Polyline2D {
    struct Loop {
        std::vector<Vec> vertices;
        bool closed = true;
    };
    std::vector<Loop> loops;

    bool empty() const { return loops.empty(); }
    std::size_t vertex_count() const;
    double length() const;

    // Visits every segment (a, b), including the closing one of closed loops.
    void for_each_segment(const std::function<void(const Vec&, const Vec&)>& f) const;
};

struct TriMesh {
    std::vector<Vec> vertices;
    std::vector<std::array<int, 3>> triangles;

    bool empty() const { return triangles.empty(); }
    double area() const;
};

// Scalar field sampled on a regular lattice; resolution samples per axis.
using ScalarField = std::function<double(const Vec&)>;

// Marching squares over a resolution^2 lattice of the interpolant.
Polyline2D contour2d(const Interpolant& itp, const Box& domain, int resolution);
Polyline2D contour2d(const ScalarField& field, const Box& domain, int resolution);

// Marching cubes over a resolution^3 lattice; triangle normals point towards
// increasing values.
TriMesh isosurface3d(const Interpolant& itp, const Box& domain, int resolution);
TriMesh isosurface3d(const ScalarField& field, const Box& domain, int resolution);

// Lattice-sample variants used by both of the above.
Polyline2D contour2d_samples(std::vector<double> samples, const Box& domain, int resolution);
TriMesh isosurface3d_samples(std::vector<double> samples, const Box& domain, int resolution);

// First-order quadrature of the integral of d over the curve / surface:
// midpoint rule per segment, centroid rule per triangle.
double energy(const Polyline2D& curve, const DistanceIndex& index);
double energy(const TriMesh& mesh, const DistanceIndex& index);

// ---------------------------------------------------------------------------
// Geometry checks

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b);
double point_triangle_distance(const Vec& p, const Vec& a, const Vec& b, const Vec& c);

// Distance from p to the nearest segment of the curve (infinity if empty).
double distance_to_curve(const Vec& p, const Polyline2D& curve);

// Symmetric Hausdorff distance between two curves, measured over vertices
// and segment midpoints of each against the segments of the other.
double hausdorff(const Polyline2D& a, const Polyline2D& b);

// Closed polygon through the given points in order.
Polyline2D polygon_through(std::span<const Vec> points);

// Point-to-mesh distance queries accelerated by a uniform bucket grid.
class MeshDistance {
public:
    explicit MeshDistance(const TriMesh& mesh);
    double operator()(const Vec& p) const;

private:
    const TriMesh& mesh_;
    Vec lo_;
    double cell_ = 1.0;
    std::array<int, 3> dims_{1, 1, 1};
    std::vector<std::vector<int>> buckets_;
};

struct MeshTopology {
    std::size_t vertices = 0;
    std::size_t edges = 0;
    std::size_t faces = 0;
    std::size_t boundary_edges = 0;    // used by one triangle
    std::size_t nonmanifold_edges = 0; // used by more than two
    std::size_t components = 0;

    bool closed() const { return boundary_edges == 0 && nonmanifold_edges == 0 && faces > 0; }
    long euler_characteristic() const
    {
        return static_cast<long>(vertices) - static_cast<long>(edges) + static_cast<long>(faces);
    }
};

MeshTopology analyze_topology(const TriMesh& mesh);

// ---------------------------------------------------------------------------
// Export

enum class GeometryFormat { CsvPolyline, Svg, Obj };

GeometryFormat parse_geometry_format(const std::string& name);

// "loop_id,x,y" rows with the first vertex of closed loops repeated at the end.
void write_polyline_csv(const Polyline2D& curve, const std::filesystem::path& path);
// One <path> per loop over an optional scatter of the data points.
void write_polyline_svg(const Polyline2D& curve, const Box& view, const std::filesystem::path& path,
                        std::span<const Vec> data = {});
// "v x y z" lines followed by 1-based "f i j k" lines.
void write_obj(const TriMesh& mesh, const std::filesystem::path& path);
TriMesh read_obj(const std::filesystem::path& path);

} // namespace slrecon
