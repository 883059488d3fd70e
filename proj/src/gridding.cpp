#include "slrecon/gridding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace slrecon {

std::size_t NodeSet::grid_count() const
{
    return static_cast<std::size_t>(std::count(kinds.begin(), kinds.end(), NodeKind::Grid));
}

std::size_t NodeSet::data_count() const
{
    return static_cast<std::size_t>(std::count(kinds.begin(), kinds.end(), NodeKind::Data));
}

std::vector<Vec> NodeSet::centers() const
{
    std::vector<Vec> c;
    c.reserve(size());
    c.insert(c.end(), interior.begin(), interior.end());
    c.insert(c.end(), anchors.begin(), anchors.end());
    return c;
}

std::vector<double> center_values(const NodeSet& nodes, const LevelSetState& state)
{
    if (state.values.size() != nodes.interior_size())
        throw Error("state size does not match the node set");
    std::vector<double> v;
    v.reserve(nodes.size());
    v.insert(v.end(), state.values.begin(), state.values.end());
    v.insert(v.end(), nodes.anchors.size(), nodes.anchor_value);
    return v;
}

namespace {

void check_domain(const Box& domain)
{
    if (domain.dim() != 2 && domain.dim() != 3) throw Error("domain must be 2D or 3D");
    if (domain.hi.size() != domain.lo.size()) throw Error("domain corners have mixed dimensions");
    for (int k = 0; k < domain.dim(); ++k)
        if (!(domain.hi[k] > domain.lo[k])) throw Error("domain box is empty along axis " + std::to_string(k));
}

// Lattice with `count` nodes per axis spanning the box; the spacing is taken
// from the longest axis so it is uniform (boxes are cubes in practice).
struct Lattice {
    Box domain;
    int count;
    double dx;

    std::size_t size() const
    {
        std::size_t n = 1;
        for (int k = 0; k < domain.dim(); ++k) n *= static_cast<std::size_t>(count);
        return n;
    }

    // Lexicographic order with the first axis varying slowest.
    template <class F>
    void for_each(F&& f) const
    {
        const int dim = domain.dim();
        Vec x(dim);
        if (dim == 2) {
            for (int i = 0; i < count; ++i)
                for (int j = 0; j < count; ++j) {
                    x << domain.lo[0] + i * dx, domain.lo[1] + j * dx;
                    f(x);
                }
        } else {
            for (int i = 0; i < count; ++i)
                for (int j = 0; j < count; ++j)
                    for (int l = 0; l < count; ++l) {
                        x << domain.lo[0] + i * dx, domain.lo[1] + j * dx, domain.lo[2] + l * dx;
                        f(x);
                    }
        }
    }
};

Lattice make_lattice(const Box& domain, int count)
{
    check_domain(domain);
    if (count < 4) throw Error("lattice needs at least 4 nodes per axis, got " + std::to_string(count));
    const Vec extent = domain.hi - domain.lo;
    const double dx = extent.maxCoeff() / (count - 1);
    if (extent.minCoeff() < extent.maxCoeff() * (1.0 - 1e-12))
        throw Error("lattice domain must have equal extents on every axis");
    return Lattice{domain, count, dx};
}

// Hashes points into cells of size `cell` to find near-coincident nodes.
class CoincidenceMap {
public:
    CoincidenceMap(double cell, double tol) : cell_(cell), tol_(tol) {}

    // Index of a stored point within tol of p, or npos.
    std::size_t find(const Vec& p) const
    {
        const auto key = cell_of(p);
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b)
                for (int c = -1; c <= 1; ++c) {
                    auto it = cells_.find(hash({key[0] + a, key[1] + b, key[2] + c}));
                    if (it == cells_.end()) continue;
                    for (const auto& [q, idx] : it->second)
                        if ((q - p).norm() <= tol_) return idx;
                }
        return npos;
    }

    void insert(const Vec& p, std::size_t idx) { cells_[hash(cell_of(p))].emplace_back(p, idx); }

    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

private:
    std::array<long, 3> cell_of(const Vec& p) const
    {
        std::array<long, 3> c{0, 0, 0};
        for (int k = 0; k < p.size(); ++k) c[k] = static_cast<long>(std::floor(p[k] / cell_));
        return c;
    }
    static long hash(const std::array<long, 3>& c)
    {
        return (c[0] * 73856093L) ^ (c[1] * 19349663L) ^ (c[2] * 83492791L);
    }

    double cell_, tol_;
    std::unordered_map<long, std::vector<std::pair<Vec, std::size_t>>> cells_;
};

} // namespace

NodeSet build_full_grid(const Box& domain, int per_axis_count)
{
    const auto lat = make_lattice(domain, per_axis_count);
    NodeSet nodes;
    nodes.dim = domain.dim();
    nodes.domain = domain;
    nodes.dx = lat.dx;
    nodes.lattice_size = lat.size();
    nodes.interior.reserve(lat.size());
    lat.for_each([&](const Vec& x) {
        nodes.interior.push_back(x);
        nodes.kinds.push_back(NodeKind::Grid);
    });
    return nodes;
}

void add_data_nodes(NodeSet& nodes, const PointSet& data)
{
    if (data.dim() != nodes.dim) throw Error("data set dimension does not match the node set");
    const double tol = 1e-9 * nodes.dx;
    CoincidenceMap map(nodes.dx, tol);
    for (std::size_t i = 0; i < nodes.interior.size(); ++i) map.insert(nodes.interior[i], i);

    for (std::size_t i = 0; i < data.size(); ++i) {
        const Vec& p = data[i];
        if (!nodes.domain.contains(p))
            throw Error("data point " + std::to_string(i) + " lies outside the computational domain");
        auto hit = map.find(p);
        if (hit != CoincidenceMap::npos) {
            nodes.kinds[hit] = NodeKind::Data;
            continue;
        }
        map.insert(p, nodes.interior.size());
        nodes.interior.push_back(p);
        nodes.kinds.push_back(NodeKind::Data);
    }
}

std::size_t drop_near_data(NodeSet& nodes, const DistanceIndex& index, double radius)
{
    std::size_t kept = 0;
    for (std::size_t i = 0; i < nodes.interior.size(); ++i) {
        if (nodes.kinds[i] == NodeKind::Grid && index.distance(nodes.interior[i]) < radius) continue;
        nodes.interior[kept] = nodes.interior[i];
        nodes.kinds[kept] = nodes.kinds[i];
        ++kept;
    }
    const std::size_t removed = nodes.interior.size() - kept;
    nodes.interior.resize(kept);
    nodes.kinds.resize(kept);
    return removed;
}

NodeSet build_reduced_grid(const Box& domain, int per_axis_count, const DistanceIndex& index, double delta_s)
{
    if (!(delta_s > 0.0)) throw Error("band threshold delta_s must be positive");
    const auto lat = make_lattice(domain, per_axis_count);
    NodeSet nodes;
    nodes.dim = domain.dim();
    nodes.domain = domain;
    nodes.dx = lat.dx;
    nodes.lattice_size = lat.size();
    lat.for_each([&](const Vec& x) {
        if (index.distance(x) < delta_s) {
            nodes.interior.push_back(x);
            nodes.kinds.push_back(NodeKind::Grid);
        }
    });
    if (nodes.interior.empty()) {
        std::ostringstream msg;
        msg << "reduced grid is empty: no lattice node within delta_s = " << delta_s
            << " of the data set (dx = " << lat.dx << ")";
        throw Error(msg.str());
    }
    add_data_nodes(nodes, index.source());
    return nodes;
}

AnchorFrame place_anchors(const Box& domain, const DistanceIndex& index, double margin, double spacing, double value)
{
    check_domain(domain);
    if (!(spacing > 0.0)) throw Error("anchor spacing must be positive");
    const int dim = domain.dim();

    std::array<int, 3> n{1, 1, 1};
    for (int k = 0; k < dim; ++k)
        n[k] = std::max(1, static_cast<int>(std::lround((domain.hi[k] - domain.lo[k]) / spacing)));

    std::vector<Vec> candidates;
    auto coord = [&](int k, int i) { return domain.lo[k] + (domain.hi[k] - domain.lo[k]) * i / n[k]; };
    if (dim == 2) {
        // Counter-clockwise walk around the rectangle, each corner once.
        for (int i = 0; i < n[0]; ++i) candidates.push_back(make_vec(coord(0, i), domain.lo[1]));
        for (int j = 0; j < n[1]; ++j) candidates.push_back(make_vec(domain.hi[0], coord(1, j)));
        for (int i = n[0]; i > 0; --i) candidates.push_back(make_vec(coord(0, i), domain.hi[1]));
        for (int j = n[1]; j > 0; --j) candidates.push_back(make_vec(domain.lo[0], coord(1, j)));
    } else {
        for (int i = 0; i <= n[0]; ++i)
            for (int j = 0; j <= n[1]; ++j)
                for (int l = 0; l <= n[2]; ++l) {
                    bool on_face = i == 0 || i == n[0] || j == 0 || j == n[1] || l == 0 || l == n[2];
                    if (on_face) candidates.push_back(make_vec(coord(0, i), coord(1, j), coord(2, l)));
                }
    }

    AnchorFrame frame;
    frame.value = value;
    for (const auto& a : candidates) {
        if (index.distance(a) < margin) {
            ++frame.dropped;
            continue;
        }
        frame.positions.push_back(a);
    }
    if (frame.dropped > 0) {
        frame.warnings.push_back(std::to_string(frame.dropped) +
                                 " anchor(s) dropped: closer than the margin to the data set");
    }
    return frame;
}

void attach_anchors(NodeSet& nodes, const AnchorFrame& frame)
{
    const double tol = 1e-9 * nodes.dx;
    CoincidenceMap map(nodes.dx, tol);
    for (std::size_t i = 0; i < nodes.interior.size(); ++i) map.insert(nodes.interior[i], i);
    nodes.anchor_value = frame.value;
    std::vector<bool> promoted(nodes.interior.size(), false);
    for (const auto& a : frame.positions) {
        if (a.size() != nodes.dim) throw Error("anchor dimension does not match the node set");
        const auto hit = map.find(a);
        if (hit == CoincidenceMap::npos - 1) continue;
        if (hit != CoincidenceMap::npos) {
            if (nodes.kinds[hit] == NodeKind::Data || promoted[hit]) continue;
            promoted[hit] = true;
        } else {
            map.insert(a, CoincidenceMap::npos - 1);
        }
        nodes.anchors.push_back(a);
    }
    std::size_t keep = 0;
    for (std::size_t i = 0; i < nodes.interior.size(); ++i) {
        if (promoted[i]) continue;
        nodes.interior[keep] = nodes.interior[i];
        nodes.kinds[keep] = nodes.kinds[i];
        ++keep;
    }
    nodes.interior.resize(keep);
    nodes.kinds.resize(keep);
}

InitialCondition initial_condition(const NodeSet& nodes, double radius, const Vec& center)
{
    if (!(radius > 0.0)) throw Error("initial radius must be positive");
    InitialCondition ic;
    ic.state.values.reserve(nodes.interior_size());
    for (std::size_t j = 0; j < nodes.interior_size(); ++j) {
        double u = (nodes.interior[j] - center).squaredNorm() - radius * radius;
        ic.state.values.push_back(u);
        if (nodes.kinds[j] == NodeKind::Data && !(u < 0.0)) ic.encloses_data = false;
    }
    return ic;
}

double data_initial_radius(const PointSet& data, const Vec& center, double factor)
{
    if (!(factor > 0.0)) throw Error("initial radius factor must be positive");
    double r = 0.0;
    for (const auto& p : data.points()) r = std::max(r, (p - center).norm());
    return factor * r;
}

double default_initial_radius(const Box& domain, const Vec& center)
{
    double best = std::numeric_limits<double>::infinity();
    const int dim = domain.dim();
    for (int corner = 0; corner < (1 << dim); ++corner) {
        Vec c(dim);
        for (int k = 0; k < dim; ++k) c[k] = (corner >> k & 1) ? domain.hi[k] : domain.lo[k];
        best = std::min(best, (c - center).norm());
    }
    return 0.9 * best;
}

void write_node_dump(const NodeSet& nodes, const std::filesystem::path& path)
{
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error("cannot write node dump '" + path.string() + "'");
    auto line = [&](const char* kind, const Vec& x) {
        std::fputs(kind, f);
        for (int k = 0; k < x.size(); ++k) std::fprintf(f, " %.17g", x[k]);
        std::fputc('\n', f);
    };
    for (std::size_t j = 0; j < nodes.interior_size(); ++j)
        line(nodes.kinds[j] == NodeKind::Grid ? "grid" : "data", nodes.interior[j]);
    for (const auto& a : nodes.anchors) line("anchor", a);
    if (std::fclose(f) != 0) throw Error("error writing '" + path.string() + "'");
}

} // namespace slrecon
