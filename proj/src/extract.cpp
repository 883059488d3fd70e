#include "slrecon/extract.hpp"

#include "mc_tables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace slrecon {

std::size_t Polyline2D::vertex_count() const
{
    std::size_t n = 0;
    for (const auto& l : loops) n += l.vertices.size();
    return n;
}

void Polyline2D::for_each_segment(const std::function<void(const Vec&, const Vec&)>& f) const
{
    for (const auto& l : loops) {
        const auto& v = l.vertices;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) f(v[i], v[i + 1]);
        if (l.closed && v.size() > 2) f(v.back(), v.front());
    }
}

double Polyline2D::length() const
{
    double s = 0.0;
    for_each_segment([&](const Vec& a, const Vec& b) { s += (b - a).norm(); });
    return s;
}

namespace {

double triangle_area(const Vec& a, const Vec& b, const Vec& c)
{
    const Eigen::Vector3d u = (b - a).head<3>(), v = (c - a).head<3>();
    return 0.5 * u.cross(v).norm();
}

void check_resolution(int resolution, const Box& domain, int dim)
{
    if (resolution < 8) throw Error("extraction resolution must be at least 8");
    if (domain.dim() != dim) throw Error("extraction domain has the wrong dimension");
}

// Moves exact zeros off the level so every crossing lies strictly inside an edge.
void nudge_zeros(std::vector<double>& s)
{
    auto [mn, mx] = std::minmax_element(s.begin(), s.end());
    double range = *mx - *mn;
    if (!(range > 0.0)) range = 1.0;
    for (auto& v : s)
        if (v == 0.0) v += 1e-12 * range;
}

std::vector<Vec> lattice_points(const Box& domain, int res)
{
    const int dim = domain.dim();
    const Vec h = (domain.hi - domain.lo) / (res - 1);
    std::vector<Vec> pts;
    if (dim == 2) {
        pts.reserve(static_cast<std::size_t>(res) * res);
        for (int j = 0; j < res; ++j)
            for (int i = 0; i < res; ++i)
                pts.push_back(make_vec(domain.lo[0] + i * h[0], domain.lo[1] + j * h[1]));
    } else {
        pts.reserve(static_cast<std::size_t>(res) * res * res);
        for (int k = 0; k < res; ++k)
            for (int j = 0; j < res; ++j)
                for (int i = 0; i < res; ++i)
                    pts.push_back(make_vec(domain.lo[0] + i * h[0], domain.lo[1] + j * h[1], domain.lo[2] + k * h[2]));
    }
    return pts;
}

std::vector<double> sample_field(const ScalarField& field, const std::vector<Vec>& pts)
{
    std::vector<double> s(pts.size());
    const auto n = static_cast<long>(pts.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) s[i] = field(pts[i]);
    return s;
}

} // namespace

// ---------------------------------------------------------------------------
// Marching squares

Polyline2D contour2d(const Interpolant& itp, const Box& domain, int resolution)
{
    check_resolution(resolution, domain, 2);
    const auto pts = lattice_points(domain, resolution);
    return contour2d_samples(itp.eval_many(pts), domain, resolution);
}

Polyline2D contour2d(const ScalarField& field, const Box& domain, int resolution)
{
    check_resolution(resolution, domain, 2);
    return contour2d_samples(sample_field(field, lattice_points(domain, resolution)), domain, resolution);
}

Polyline2D contour2d_samples(std::vector<double> s, const Box& domain, int res)
{
    check_resolution(res, domain, 2);
    if (s.size() != static_cast<std::size_t>(res) * res) throw Error("sample count does not match the lattice");
    nudge_zeros(s);
    const Vec h = (domain.hi - domain.lo) / (res - 1);
    auto at = [&](int i, int j) { return s[static_cast<std::size_t>(j) * res + i]; };
    auto pos = [&](int i, int j) { return make_vec(domain.lo[0] + i * h[0], domain.lo[1] + j * h[1]); };

    // Edge ids: horizontal edge (i,j)-(i+1,j) -> j*res + i; vertical edge
    // (i,j)-(i,j+1) -> res*res + j*res + i.
    const std::size_t nedges = 2 * static_cast<std::size_t>(res) * res;
    std::vector<int> edge_vertex(nedges, -1);
    std::vector<Vec> verts;
    std::vector<std::array<int, 2>> adj;

    auto vertex_on = [&](int i0, int j0, int i1, int j1) {
        const std::size_t id = (i0 == i1) ? static_cast<std::size_t>(res) * res + static_cast<std::size_t>(j0) * res + i0
                                          : static_cast<std::size_t>(j0) * res + i0;
        if (edge_vertex[id] < 0) {
            const double a = at(i0, j0), b = at(i1, j1);
            const double t = a / (a - b);
            edge_vertex[id] = static_cast<int>(verts.size());
            verts.push_back(pos(i0, j0) + t * (pos(i1, j1) - pos(i0, j0)));
            adj.push_back({-1, -1});
        }
        return edge_vertex[id];
    };
    auto link = [&](int a, int b) {
        for (int v : {a, b}) {
            int other = (v == a) ? b : a;
            auto& slot = adj[v];
            if (slot[0] < 0) slot[0] = other;
            else slot[1] = other;
        }
    };

    for (int j = 0; j + 1 < res; ++j) {
        for (int i = 0; i + 1 < res; ++i) {
            const double c[4] = {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
            int cs = 0;
            for (int k = 0; k < 4; ++k)
                if (c[k] < 0.0) cs |= 1 << k;
            if (cs == 0 || cs == 15) continue;

            auto edge = [&](int e) {
                switch (e) {
                case 0: return vertex_on(i, j, i + 1, j);
                case 1: return vertex_on(i + 1, j, i + 1, j + 1);
                case 2: return vertex_on(i, j + 1, i + 1, j + 1);
                default: return vertex_on(i, j, i, j + 1);
                }
            };
            const bool center_negative = (c[0] + c[1] + c[2] + c[3]) < 0.0;
            std::vector<std::array<int, 2>> segs;
            switch (cs) {
            case 1: case 14: segs = {{3, 0}}; break;
            case 2: case 13: segs = {{0, 1}}; break;
            case 3: case 12: segs = {{3, 1}}; break;
            case 4: case 11: segs = {{1, 2}}; break;
            case 6: case 9: segs = {{0, 2}}; break;
            case 7: case 8: segs = {{3, 2}}; break;
            case 5:
                // c0, c2 negative
                segs = center_negative ? std::vector<std::array<int, 2>>{{0, 1}, {2, 3}}
                                       : std::vector<std::array<int, 2>>{{3, 0}, {1, 2}};
                break;
            case 10:
                // c1, c3 negative
                segs = center_negative ? std::vector<std::array<int, 2>>{{3, 0}, {1, 2}}
                                       : std::vector<std::array<int, 2>>{{0, 1}, {2, 3}};
                break;
            }
            for (auto [ea, eb] : segs) link(edge(ea), edge(eb));
        }
    }

    Polyline2D out;
    std::vector<char> used(verts.size(), 0);
    auto walk = [&](int start, bool closed) {
        Polyline2D::Loop loop;
        loop.closed = closed;
        int prev = -1, cur = start;
        while (cur >= 0 && !used[cur]) {
            used[cur] = 1;
            loop.vertices.push_back(verts[cur]);
            int next = adj[cur][0] != prev ? adj[cur][0] : adj[cur][1];
            if (adj[cur][0] == adj[cur][1]) next = adj[cur][0];
            prev = cur;
            cur = next;
        }
        out.loops.push_back(std::move(loop));
    };
    // Open chains start at degree-one vertices on the lattice boundary.
    for (std::size_t v = 0; v < verts.size(); ++v)
        if (!used[v] && adj[v][1] < 0) walk(static_cast<int>(v), false);
    for (std::size_t v = 0; v < verts.size(); ++v)
        if (!used[v]) walk(static_cast<int>(v), true);
    return out;
}

// ---------------------------------------------------------------------------
// Marching cubes

TriMesh isosurface3d(const Interpolant& itp, const Box& domain, int resolution)
{
    check_resolution(resolution, domain, 3);
    const auto pts = lattice_points(domain, resolution);
    return isosurface3d_samples(itp.eval_many(pts), domain, resolution);
}

TriMesh isosurface3d(const ScalarField& field, const Box& domain, int resolution)
{
    check_resolution(resolution, domain, 3);
    return isosurface3d_samples(sample_field(field, lattice_points(domain, resolution)), domain, resolution);
}

TriMesh isosurface3d_samples(std::vector<double> s, const Box& domain, int res)
{
    check_resolution(res, domain, 3);
    const std::size_t n = static_cast<std::size_t>(res);
    if (s.size() != n * n * n) throw Error("sample count does not match the lattice");
    nudge_zeros(s);
    const Vec h = (domain.hi - domain.lo) / (res - 1);
    auto idx = [&](std::size_t i, std::size_t j, std::size_t k) { return (k * n + j) * n + i; };
    auto pos = [&](std::size_t i, std::size_t j, std::size_t k) {
        return make_vec(domain.lo[0] + i * h[0], domain.lo[1] + j * h[1], domain.lo[2] + k * h[2]);
    };

    TriMesh mesh;
    std::vector<int> edge_vertex(3 * n * n * n, -1);

    // Vertex on the lattice edge from corner a to corner b (offsets differ in one axis).
    auto vertex_on = [&](std::size_t i, std::size_t j, std::size_t k, int ca, int cb) {
        const auto& oa = mc::corner_offset[ca];
        const auto& ob = mc::corner_offset[cb];
        int ax = 0;
        while (oa[ax] == ob[ax]) ++ax;
        const std::size_t li = i + std::min(oa[0], ob[0]);
        const std::size_t lj = j + std::min(oa[1], ob[1]);
        const std::size_t lk = k + std::min(oa[2], ob[2]);
        const std::size_t id = ax * n * n * n + idx(li, lj, lk);
        if (edge_vertex[id] < 0) {
            const std::size_t ui = li + (ax == 0), uj = lj + (ax == 1), uk = lk + (ax == 2);
            const double a = s[idx(li, lj, lk)], b = s[idx(ui, uj, uk)];
            const double t = a / (a - b);
            const Vec pa = pos(li, lj, lk), pb = pos(ui, uj, uk);
            edge_vertex[id] = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back(pa + t * (pb - pa));
        }
        return edge_vertex[id];
    };

    for (std::size_t k = 0; k + 1 < n; ++k)
        for (std::size_t j = 0; j + 1 < n; ++j)
            for (std::size_t i = 0; i + 1 < n; ++i) {
                int cs = 0;
                for (int c = 0; c < 8; ++c) {
                    const auto& o = mc::corner_offset[c];
                    if (s[idx(i + o[0], j + o[1], k + o[2])] < 0.0) cs |= 1 << c;
                }
                if (cs == 0 || cs == 255) continue;
                const auto& row = mc::tri_table[cs];
                for (int t = 0; row[t] != -1; t += 3) {
                    std::array<int, 3> tri;
                    for (int q = 0; q < 3; ++q) {
                        const auto& ec = mc::edge_corners[row[t + q]];
                        tri[q] = vertex_on(i, j, k, ec[0], ec[1]);
                    }
                    if (triangle_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]) <= 1e-14)
                        continue;
                    // The table winds triangles with normals towards the
                    // negative side; flip so they follow increasing values.
                    std::swap(tri[1], tri[2]);
                    mesh.triangles.push_back(tri);
                }
            }
    return mesh;
}

double TriMesh::area() const
{
    double a = 0.0;
    for (const auto& t : triangles) a += triangle_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
    return a;
}

// ---------------------------------------------------------------------------
// Energy

double energy(const Polyline2D& curve, const DistanceIndex& index)
{
    double e = 0.0;
    curve.for_each_segment([&](const Vec& a, const Vec& b) { e += index.distance(0.5 * (a + b)) * (b - a).norm(); });
    return e;
}

double energy(const TriMesh& mesh, const DistanceIndex& index)
{
    double e = 0.0;
    for (const auto& t : mesh.triangles) {
        const Vec& a = mesh.vertices[t[0]];
        const Vec& b = mesh.vertices[t[1]];
        const Vec& c = mesh.vertices[t[2]];
        e += index.distance((a + b + c) / 3.0) * triangle_area(a, b, c);
    }
    return e;
}

// ---------------------------------------------------------------------------
// Geometry checks

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b)
{
    const Vec ab = b - a;
    const double len2 = ab.squaredNorm();
    double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (a + t * ab - p).norm();
}

double point_triangle_distance(const Vec& pv, const Vec& av, const Vec& bv, const Vec& cv)
{
    // Closest point on triangle by Voronoi-region classification.
    const Eigen::Vector3d p = pv.head<3>(), a = av.head<3>(), b = bv.head<3>(), c = cv.head<3>();
    const Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return (p - a).norm();
    const Eigen::Vector3d bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return (p - b).norm();
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return (p - (a + d1 / (d1 - d3) * ab)).norm();
    const Eigen::Vector3d cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return (p - c).norm();
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return (p - (a + d2 / (d2 - d6) * ac)).norm();
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
        return (p - (b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b))).norm();
    const double denom = 1.0 / (va + vb + vc);
    const Eigen::Vector3d q = a + ab * (vb * denom) + ac * (vc * denom);
    return (p - q).norm();
}

double distance_to_curve(const Vec& p, const Polyline2D& curve)
{
    double best = std::numeric_limits<double>::infinity();
    curve.for_each_segment([&](const Vec& a, const Vec& b) { best = std::min(best, point_segment_distance(p, a, b)); });
    return best;
}

namespace {

double directed_hausdorff(const Polyline2D& from, const Polyline2D& to)
{
    double worst = 0.0;
    auto probe = [&](const Vec& p) { worst = std::max(worst, distance_to_curve(p, to)); };
    from.for_each_segment([&](const Vec& a, const Vec& b) {
        probe(a);
        probe(0.5 * (a + b));
    });
    for (const auto& l : from.loops)
        if (!l.closed && !l.vertices.empty()) probe(l.vertices.back());
    return worst;
}

} // namespace

double hausdorff(const Polyline2D& a, const Polyline2D& b)
{
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

Polyline2D polygon_through(std::span<const Vec> points)
{
    Polyline2D p;
    p.loops.push_back({std::vector<Vec>(points.begin(), points.end()), true});
    return p;
}

MeshDistance::MeshDistance(const TriMesh& mesh) : mesh_(mesh)
{
    if (mesh.vertices.empty()) return;
    Vec lo = mesh.vertices[0], hi = lo;
    for (const auto& v : mesh.vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    const double extent = std::max((hi - lo).maxCoeff(), 1e-12);
    const double ntri = std::max<double>(1.0, static_cast<double>(mesh.triangles.size()));
    cell_ = extent / std::clamp(std::cbrt(ntri / 2.0), 1.0, 128.0);
    lo_ = lo;
    for (int k = 0; k < 3; ++k) dims_[k] = std::max(1, static_cast<int>(std::ceil((hi[k] - lo[k]) / cell_)) + 1);
    buckets_.resize(static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2]);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        Vec tlo = mesh.vertices[mesh.triangles[t][0]], thi = tlo;
        for (int q = 1; q < 3; ++q) {
            tlo = tlo.cwiseMin(mesh.vertices[mesh.triangles[t][q]]);
            thi = thi.cwiseMax(mesh.vertices[mesh.triangles[t][q]]);
        }
        std::array<int, 3> a, b;
        for (int k = 0; k < 3; ++k) {
            a[k] = std::clamp(static_cast<int>(std::floor((tlo[k] - lo_[k]) / cell_)), 0, dims_[k] - 1);
            b[k] = std::clamp(static_cast<int>(std::floor((thi[k] - lo_[k]) / cell_)), 0, dims_[k] - 1);
        }
        for (int x = a[0]; x <= b[0]; ++x)
            for (int y = a[1]; y <= b[1]; ++y)
                for (int z = a[2]; z <= b[2]; ++z)
                    buckets_[(static_cast<std::size_t>(z) * dims_[1] + y) * dims_[0] + x].push_back(static_cast<int>(t));
    }
}

double MeshDistance::operator()(const Vec& p) const
{
    double best = std::numeric_limits<double>::infinity();
    if (mesh_.triangles.empty()) return best;
    auto tri_dist = [&](int t) {
        const auto& tr = mesh_.triangles[t];
        return point_triangle_distance(p, mesh_.vertices[tr[0]], mesh_.vertices[tr[1]], mesh_.vertices[tr[2]]);
    };

    std::array<int, 3> c;
    double outside = 0.0; // distance from p to the bucket grid box
    for (int k = 0; k < 3; ++k) {
        const double rel = (p[k] - lo_[k]) / cell_;
        c[k] = std::clamp(static_cast<int>(std::floor(rel)), 0, dims_[k] - 1);
        const double over = std::max({0.0, -rel, rel - dims_[k]});
        outside = std::max(outside, over * cell_);
    }
    const int max_ring = std::max({dims_[0], dims_[1], dims_[2]});
    for (int r = 0; r <= max_ring; ++r) {
        for (int x = c[0] - r; x <= c[0] + r; ++x)
            for (int y = c[1] - r; y <= c[1] + r; ++y)
                for (int z = c[2] - r; z <= c[2] + r; ++z) {
                    if (std::max({std::abs(x - c[0]), std::abs(y - c[1]), std::abs(z - c[2])}) != r) continue;
                    if (x < 0 || y < 0 || z < 0 || x >= dims_[0] || y >= dims_[1] || z >= dims_[2]) continue;
                    for (int t : buckets_[(static_cast<std::size_t>(z) * dims_[1] + y) * dims_[0] + x])
                        best = std::min(best, tri_dist(t));
                }
        // Unvisited cells are at least r cells away (less the offset outside the grid).
        if (best <= r * cell_ - outside) break;
    }
    return best;
}

MeshTopology analyze_topology(const TriMesh& mesh)
{
    MeshTopology topo;
    topo.faces = mesh.triangles.size();
    std::map<std::pair<int, int>, int> edges;
    std::vector<int> parent(mesh.vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    std::vector<char> used(mesh.vertices.size(), 0);
    for (const auto& t : mesh.triangles) {
        for (int q = 0; q < 3; ++q) {
            int a = t[q], b = t[(q + 1) % 3];
            ++edges[{std::min(a, b), std::max(a, b)}];
            parent[find(a)] = find(b);
            used[a] = 1;
        }
    }
    topo.vertices = static_cast<std::size_t>(std::count(used.begin(), used.end(), 1));
    topo.edges = edges.size();
    for (const auto& [e, count] : edges) {
        if (count == 1) ++topo.boundary_edges;
        if (count > 2) ++topo.nonmanifold_edges;
    }
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
        if (used[v] && find(static_cast<int>(v)) == static_cast<int>(v)) ++topo.components;
    return topo;
}

// ---------------------------------------------------------------------------
// Export

GeometryFormat parse_geometry_format(const std::string& name)
{
    if (name == "csv" || name == "csv-polyline") return GeometryFormat::CsvPolyline;
    if (name == "svg") return GeometryFormat::Svg;
    if (name == "obj") return GeometryFormat::Obj;
    throw Error("unknown geometry format '" + name + "'");
}

namespace {

std::FILE* open_for_write(const std::filesystem::path& path)
{
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error("cannot write '" + path.string() + "'");
    return f;
}

void close_checked(std::FILE* f, const std::filesystem::path& path)
{
    if (std::fclose(f) != 0) throw Error("error writing '" + path.string() + "'");
}

} // namespace

void write_polyline_csv(const Polyline2D& curve, const std::filesystem::path& path)
{
    std::FILE* f = open_for_write(path);
    std::fputs("loop_id,x,y\n", f);
    for (std::size_t l = 0; l < curve.loops.size(); ++l) {
        const auto& loop = curve.loops[l];
        for (const auto& v : loop.vertices) std::fprintf(f, "%zu,%.17g,%.17g\n", l, v[0], v[1]);
        if (loop.closed && !loop.vertices.empty())
            std::fprintf(f, "%zu,%.17g,%.17g\n", l, loop.vertices.front()[0], loop.vertices.front()[1]);
    }
    close_checked(f, path);
}

void write_polyline_svg(const Polyline2D& curve, const Box& view, const std::filesystem::path& path,
                        std::span<const Vec> data)
{
    const double size = 800.0;
    const double scale = size / (view.hi - view.lo).maxCoeff();
    auto px = [&](const Vec& v) { return (v[0] - view.lo[0]) * scale; };
    auto py = [&](const Vec& v) { return (view.hi[1] - v[1]) * scale; };

    std::FILE* f = open_for_write(path);
    std::fprintf(f, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" viewBox=\"0 0 %g %g\">\n",
                 size, size, size, size);
    std::fputs("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n", f);
    for (const auto& loop : curve.loops) {
        if (loop.vertices.empty()) continue;
        std::fputs("<path fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" d=\"", f);
        for (std::size_t i = 0; i < loop.vertices.size(); ++i)
            std::fprintf(f, "%s%.3f %.3f ", i ? "L" : "M", px(loop.vertices[i]), py(loop.vertices[i]));
        if (loop.closed) std::fputs("Z", f);
        std::fputs("\"/>\n", f);
    }
    for (const auto& p : data)
        std::fprintf(f, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"4\" fill=\"none\" stroke=\"red\"/>\n", px(p), py(p));
    std::fputs("</svg>\n", f);
    close_checked(f, path);
}

void write_obj(const TriMesh& mesh, const std::filesystem::path& path)
{
    std::FILE* f = open_for_write(path);
    for (const auto& v : mesh.vertices) std::fprintf(f, "v %.17g %.17g %.17g\n", v[0], v[1], v[2]);
    for (const auto& t : mesh.triangles) std::fprintf(f, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
    close_checked(f, path);
}

TriMesh read_obj(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot read '" + path.string() + "'");
    TriMesh mesh;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag)) continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ss >> x >> y >> z)) throw Error(path.string() + ":" + std::to_string(lineno) + ": bad vertex");
            mesh.vertices.push_back(make_vec(x, y, z));
        } else if (tag == "f") {
            std::array<int, 3> t;
            for (auto& i : t) {
                std::string tok;
                if (!(ss >> tok)) throw Error(path.string() + ":" + std::to_string(lineno) + ": bad face");
                i = std::stoi(tok.substr(0, tok.find('/'))) - 1;
            }
            mesh.triangles.push_back(t);
        }
    }
    return mesh;
}

} // namespace slrecon
