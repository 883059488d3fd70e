#include "slrecon/pointcloud.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

namespace slrecon {

PointSet::PointSet(int dim, std::vector<Vec> points)
    : dim_(dim), points_(std::move(points))
{
    if (dim_ != 2 && dim_ != 3)
        throw Error("point set dimension must be 2 or 3, got " + std::to_string(dim_));
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].size() != dim_)
            throw Error("point " + std::to_string(i) + " has wrong dimension");
        if (!points_[i].allFinite())
            throw Error("point " + std::to_string(i) + " has a non-finite coordinate");
    }
}

Vec PointSet::centroid() const
{
    Vec c = Vec::Zero(dim_);
    for (const auto& p : points_) c += p;
    if (!points_.empty()) c /= static_cast<double>(points_.size());
    return c;
}

Box PointSet::bounding_box() const
{
    Box b{Vec::Constant(dim_, std::numeric_limits<double>::infinity()),
          Vec::Constant(dim_, -std::numeric_limits<double>::infinity())};
    for (const auto& p : points_) {
        b.lo = b.lo.cwiseMin(p);
        b.hi = b.hi.cwiseMax(p);
    }
    return b;
}

bool PointSet::operator==(const PointSet& other) const
{
    if (dim_ != other.dim_ || points_.size() != other.points_.size()) return false;
    for (std::size_t i = 0; i < points_.size(); ++i)
        if (points_[i] != other.points_[i]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Text I/O

namespace {

bool is_skipped_obj_tag(const std::string& tok)
{
    static const std::array<const char*, 10> tags = {"vn", "vt", "vp", "f", "l", "o", "g", "s", "usemtl", "mtllib"};
    return std::any_of(tags.begin(), tags.end(), [&](const char* t) { return tok == t; });
}

bool parse_double(const std::string& tok, double& out)
{
    char* end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    return end != tok.c_str() && *end == '\0';
}

} // namespace

PointSet load_points(const std::filesystem::path& path, int dim)
{
    if (dim != 2 && dim != 3) throw ParseError("dimension must be 2 or 3");
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read point file '" + path.string() + "'");

    std::vector<Vec> pts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::vector<std::string> toks;
        for (std::string t; ss >> t;) toks.push_back(t);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (is_skipped_obj_tag(toks[0])) continue;
        std::size_t first = (toks[0] == "v") ? 1 : 0;

        auto where = [&] { return path.string() + ":" + std::to_string(lineno); };
        if (toks.size() - first < static_cast<std::size_t>(dim))
            throw ParseError(where() + ": expected " + std::to_string(dim) + " coordinates");
        Vec p(dim);
        for (int k = 0; k < dim; ++k) {
            double v = 0.0;
            if (!parse_double(toks[first + k], v))
                throw ParseError(where() + ": '" + toks[first + k] + "' is not a number");
            if (!std::isfinite(v))
                throw ParseError(where() + ": non-finite coordinate");
            p[k] = v;
        }
        pts.push_back(p);
    }
    return PointSet(dim, std::move(pts));
}

void save_points(const PointSet& ps, const std::filesystem::path& path)
{
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error("cannot write point file '" + path.string() + "'");
    for (const auto& p : ps) {
        for (int k = 0; k < ps.dim(); ++k)
            std::fprintf(f, k ? " %.17g" : "%.17g", p[k]);
        std::fputc('\n', f);
    }
    if (std::fclose(f) != 0) throw Error("error writing '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// Shapes

Shape parse_shape(const std::string& name)
{
    if (name == "heart2d") return Shape::Heart2D;
    if (name == "heart3d") return Shape::Heart3D;
    if (name == "cubes3d") return Shape::Cubes3D;
    throw Error("unknown shape '" + name + "' (expected heart2d, heart3d or cubes3d)");
}

std::string shape_name(Shape shape)
{
    switch (shape) {
    case Shape::Heart2D: return "heart2d";
    case Shape::Heart3D: return "heart3d";
    case Shape::Cubes3D: return "cubes3d";
    }
    return "?";
}

int shape_dim(Shape shape) { return shape == Shape::Heart2D ? 2 : 3; }

namespace shapes {

namespace {

constexpr double pi = std::numbers::pi;

Fit fit_box(const Box& raw, double fit)
{
    Fit f;
    f.center = (raw.lo + raw.hi) / 2.0;
    f.scale = 2.0 * fit / (raw.hi - raw.lo).maxCoeff();
    return f;
}

// Heart surface: (x^2 + 9/4 y^2 + z^2 - 1)^3 - x^2 z^3 - 9/80 y^2 z^3 = 0.
Vec heart3d_gradient(const Vec& p)
{
    const double x = p[0], y = p[1], z = p[2];
    const double a = x * x + 2.25 * y * y + z * z - 1.0;
    const double a2 = 3.0 * a * a;
    const double z3 = z * z * z;
    return make_vec(a2 * 2.0 * x - 2.0 * x * z3,
                    a2 * 4.5 * y - (9.0 / 40.0) * y * z3,
                    a2 * 2.0 * z - 3.0 * x * x * z * z - (27.0 / 80.0) * y * y * z * z);
}

// First zero of the heart function along the ray r * dir, r > 0.
double heart3d_ray_root(const Vec& dir)
{
    const double step = 0.01;
    double r0 = 0.0;
    double f0 = heart3d_implicit(dir * r0);
    double r1 = step;
    for (; r1 < 4.0; r1 += step) {
        double f1 = heart3d_implicit(dir * r1);
        if ((f0 < 0.0) != (f1 < 0.0)) break;
        r0 = r1;
        f0 = f1;
    }
    for (int it = 0; it < 200 && r1 - r0 > 1e-15; ++it) {
        double rm = 0.5 * (r0 + r1);
        double fm = heart3d_implicit(dir * rm);
        if ((fm < 0.0) == (f0 < 0.0)) {
            r0 = rm;
            f0 = fm;
        } else {
            r1 = rm;
        }
    }
    return 0.5 * (r0 + r1);
}

// Area element of the star-shaped heart per unit solid angle.
double heart3d_area_weight(const Vec& dir, double r)
{
    Vec g = heart3d_gradient(dir * r);
    double gn = g.norm();
    double c = gn > 0.0 ? std::abs(g.dot(dir)) / gn : 0.0;
    return r * r / std::max(c, 0.05);
}

std::vector<Vec> fibonacci_directions(int n)
{
    std::vector<Vec> dirs;
    dirs.reserve(n);
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        double z = 1.0 - 2.0 * (i + 0.5) / n;
        double r = std::sqrt(1.0 - z * z);
        double phi = golden * i;
        dirs.push_back(make_vec(r * std::cos(phi), r * std::sin(phi), z));
    }
    return dirs;
}

struct CubeFrame {
    Vec center;
    Eigen::Matrix3d rot;
    double half;

    Vec to_local(const Vec& p) const { return rot.transpose() * (p - center); }
    Vec to_world(const Vec& l) const { return rot * l + center; }
    double value(const Vec& p) const { return to_local(p).cwiseAbs().maxCoeff() - half; }
};

Eigen::Matrix3d rotation(double deg_a, const Eigen::Vector3d& axis_a, double deg_b, const Eigen::Vector3d& axis_b)
{
    using Eigen::AngleAxisd;
    return (AngleAxisd(deg_a * pi / 180.0, axis_a) * AngleAxisd(deg_b * pi / 180.0, axis_b)).toRotationMatrix();
}

const std::array<CubeFrame, 2>& cube_frames()
{
    static const std::array<CubeFrame, 2> frames = {
        CubeFrame{make_vec(-0.35, -0.25, -0.2), rotation(20.0, Eigen::Vector3d::UnitX(), 40.0, Eigen::Vector3d::UnitY()), 0.75},
        CubeFrame{make_vec(0.35, 0.25, 0.25), rotation(20.0, Eigen::Vector3d::UnitY(), 40.0, Eigen::Vector3d::UnitZ()), 0.75},
    };
    return frames;
}

// Rejects candidates closer than `sep` to an accepted point.
class SeparationFilter {
public:
    explicit SeparationFilter(double sep) : sep_(sep) {}

    bool try_insert(const Vec& p)
    {
        auto key = cell_of(p);
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -1; dz <= 1; ++dz) {
                    auto it = cells_.find(hash({key[0] + dx, key[1] + dy, key[2] + dz}));
                    if (it == cells_.end()) continue;
                    for (const auto& q : it->second)
                        if ((q - p).norm() < sep_) return false;
                }
        cells_[hash(key)].push_back(p);
        return true;
    }

private:
    std::array<long, 3> cell_of(const Vec& p) const
    {
        std::array<long, 3> c{0, 0, 0};
        for (int k = 0; k < p.size(); ++k) c[k] = static_cast<long>(std::floor(p[k] / sep_));
        return c;
    }
    static long hash(const std::array<long, 3>& c)
    {
        return (c[0] * 73856093L) ^ (c[1] * 19349663L) ^ (c[2] * 83492791L);
    }

    double sep_;
    std::unordered_map<long, std::vector<Vec>> cells_;
};

} // namespace

Vec heart2d_curve(double t)
{
    const double s = std::sin(t);
    return make_vec(16.0 * s * s * s,
                    13.0 * std::cos(t) - 5.0 * std::cos(2 * t) - 2.0 * std::cos(3 * t) - std::cos(4 * t));
}

double heart3d_implicit(const Vec& p)
{
    const double x = p[0], y = p[1], z = p[2];
    const double a = x * x + 2.25 * y * y + z * z - 1.0;
    const double z3 = z * z * z;
    return a * a * a - x * x * z3 - (9.0 / 80.0) * y * y * z3;
}

double cubes_union_value(const Vec& p)
{
    const auto& f = cube_frames();
    return std::min(f[0].value(p), f[1].value(p));
}

Fit heart2d_fit(double fit)
{
    Box b{make_vec(1e300, 1e300), make_vec(-1e300, -1e300)};
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        Vec p = heart2d_curve(2.0 * pi * i / n);
        b.lo = b.lo.cwiseMin(p);
        b.hi = b.hi.cwiseMax(p);
    }
    return fit_box(b, fit);
}

Fit heart3d_fit(double fit)
{
    Box b{Vec::Constant(3, 1e300), Vec::Constant(3, -1e300)};
    for (const auto& d : fibonacci_directions(20000)) {
        Vec p = d * heart3d_ray_root(d);
        b.lo = b.lo.cwiseMin(p);
        b.hi = b.hi.cwiseMax(p);
    }
    return fit_box(b, fit);
}

Fit cubes_fit(double fit)
{
    Box b{Vec::Constant(3, 1e300), Vec::Constant(3, -1e300)};
    for (const auto& c : cube_frames())
        for (int corner = 0; corner < 8; ++corner) {
            Vec l(3);
            for (int k = 0; k < 3; ++k) l[k] = (corner >> k & 1) ? c.half : -c.half;
            Vec p = c.to_world(l);
            b.lo = b.lo.cwiseMin(p);
            b.hi = b.hi.cwiseMax(p);
        }
    return fit_box(b, fit);
}

} // namespace shapes

namespace {

PointSet generate_heart2d(const ShapeRequest& req)
{
    const auto fit = shapes::heart2d_fit(req.fit);
    std::vector<Vec> pts;
    pts.reserve(req.count);
    for (std::size_t i = 0; i < req.count; ++i) {
        double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(req.count);
        pts.push_back(fit.to_output(shapes::heart2d_curve(t)));
    }
    return PointSet(2, std::move(pts));
}

PointSet generate_heart3d(const ShapeRequest& req)
{
    using namespace shapes;
    const auto fit = heart3d_fit(req.fit);

    // Pilot pass over a regular direction set bounds the area weight and
    // estimates the surface area (both in the raw frame).
    double wmax = 0.0, wsum = 0.0;
    const auto pilot = fibonacci_directions(20000);
    for (const auto& d : pilot) {
        double w = heart3d_area_weight(d, heart3d_ray_root(d));
        wmax = std::max(wmax, w);
        wsum += w;
    }
    const double area = 4.0 * std::numbers::pi * wsum / pilot.size() * fit.scale * fit.scale;
    const double sep = 0.5 * std::sqrt(area / static_cast<double>(req.count));

    std::mt19937_64 rng(req.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SeparationFilter filter(sep);

    std::vector<Vec> pts;
    pts.reserve(req.count);
    std::size_t attempts = 0;
    while (pts.size() < req.count) {
        if (++attempts > 10000 * req.count)
            throw Error("heart3d sampling did not reach the requested count");
        Vec d = make_vec(normal(rng), normal(rng), normal(rng));
        double dn = d.norm();
        if (dn == 0.0) continue;
        d /= dn;
        double r = heart3d_ray_root(d);
        if (unit(rng) * wmax > heart3d_area_weight(d, r)) continue;
        Vec p = fit.to_output(d * r);
        if (filter.try_insert(p)) pts.push_back(p);
    }
    return PointSet(3, std::move(pts));
}

PointSet generate_cubes3d(const ShapeRequest& req)
{
    using namespace shapes;
    const auto fit = cubes_fit(req.fit);
    const auto& frames = cube_frames();

    std::mt19937_64 rng(req.seed);
    std::uniform_int_distribution<int> face_pick(0, 11);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);

    // face index: cube = f / 6, axis = (f % 6) / 2, side = f % 2
    auto sample_face = [&](int f) {
        const auto& c = frames[f / 6];
        int axis = (f % 6) / 2;
        Vec l(3);
        for (int k = 0; k < 3; ++k) l[k] = coord(rng) * c.half;
        l[axis] = (f % 2) ? c.half : -c.half;
        return std::pair{c.to_world(l), f / 6};
    };
    auto exposed = [&](const Vec& p, int own) { return frames[1 - own].value(p) >= 0.0; };

    // Estimate the exposed area of the union boundary.
    const int pilot = 20000;
    int hits = 0;
    for (int i = 0; i < pilot; ++i) {
        auto [p, own] = sample_face(face_pick(rng));
        hits += exposed(p, own);
    }
    double total = 0.0;
    for (const auto& c : frames) total += 6.0 * 4.0 * c.half * c.half;
    const double area = total * hits / pilot * fit.scale * fit.scale;
    const double sep = 0.5 * std::sqrt(area / static_cast<double>(req.count));

    SeparationFilter filter(sep);
    std::vector<Vec> pts;
    pts.reserve(req.count);
    std::size_t attempts = 0;
    while (pts.size() < req.count) {
        if (++attempts > 10000 * req.count)
            throw Error("cubes3d sampling did not reach the requested count");
        auto [raw, own] = sample_face(face_pick(rng));
        if (!exposed(raw, own)) continue;
        Vec p = fit.to_output(raw);
        if (filter.try_insert(p)) pts.push_back(p);
    }
    return PointSet(3, std::move(pts));
}

} // namespace

PointSet generate_shape(const ShapeRequest& request)
{
    if (request.count < 4) throw Error("shape sample count must be at least 4");
    if (!(request.fit > 0.0)) throw Error("shape fit half-width must be positive");
    switch (request.shape) {
    case Shape::Heart2D: return generate_heart2d(request);
    case Shape::Heart3D: return generate_heart3d(request);
    case Shape::Cubes3D: return generate_cubes3d(request);
    }
    throw Error("unknown shape");
}

PointSet perturb(const PointSet& ps, double eta, std::uint64_t seed)
{
    if (!(eta >= 0.0)) throw Error("noise amplitude must be nonnegative");
    if (eta == 0.0) return ps;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> noise(-eta, eta);
    std::vector<Vec> out;
    out.reserve(ps.size());
    for (const auto& p : ps) {
        Vec q = p;
        for (int k = 0; k < ps.dim(); ++k) q[k] += noise(rng);
        out.push_back(q);
    }
    return PointSet(ps.dim(), std::move(out));
}

PointSet subsample_stride(const PointSet& ps, std::size_t stride)
{
    if (stride == 0) throw Error("stride must be positive");
    std::vector<Vec> out;
    for (std::size_t i = 0; i < ps.size(); i += stride) out.push_back(ps[i]);
    return PointSet(ps.dim(), std::move(out));
}

} // namespace slrecon
