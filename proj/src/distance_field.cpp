#include "slrecon/distance_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace slrecon {

namespace {
constexpr std::uint32_t leaf_size = 8;
}

DistanceIndex::DistanceIndex(PointSet source, double dx)
    : source_(std::move(source)), dx_(dx)
{
    if (source_.empty()) throw Error("distance index needs a non-empty point set");
    if (!(dx_ > 0.0)) throw Error("distance index spacing must be positive");
    order_.resize(source_.size());
    std::iota(order_.begin(), order_.end(), 0u);
    if (source_.size() >= brute_force_below) {
        nodes_.reserve(2 * source_.size() / leaf_size + 1);
        build(0, static_cast<std::uint32_t>(order_.size()));
    }
}

std::uint32_t DistanceIndex::build(std::uint32_t begin, std::uint32_t end)
{
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{});
    if (end - begin <= leaf_size) {
        nodes_[id].begin = begin;
        nodes_[id].end = end;
        return id;
    }

    Vec lo = source_[order_[begin]], hi = lo;
    for (auto i = begin; i < end; ++i) {
        lo = lo.cwiseMin(source_[order_[i]]);
        hi = hi.cwiseMax(source_[order_[i]]);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);

    const auto mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) { return source_[a][axis] < source_[b][axis]; });

    const double split = source_[order_[mid]][axis];
    const auto left = build(begin, mid);
    const auto right = build(mid, end);
    Node& n = nodes_[id];
    n.split_dim = axis;
    n.split = split;
    n.left = left;
    n.right = right;
    return id;
}

void DistanceIndex::search(std::uint32_t id, const Vec& x, Nearest& best, double& best_sq) const
{
    const Node& n = nodes_[id];
    if (n.split_dim < 0) {
        for (auto i = n.begin; i < n.end; ++i) {
            double sq = (source_[order_[i]] - x).squaredNorm();
            if (sq < best_sq) {
                best_sq = sq;
                best.index = order_[i];
            }
        }
        return;
    }
    const double delta = x[n.split_dim] - n.split;
    const auto near = delta < 0.0 ? n.left : n.right;
    const auto far = delta < 0.0 ? n.right : n.left;
    search(near, x, best, best_sq);
    if (delta * delta < best_sq) search(far, x, best, best_sq);
}

DistanceIndex::Nearest DistanceIndex::nearest(const Vec& x) const
{
    Nearest best{0, 0.0};
    double best_sq = std::numeric_limits<double>::infinity();
    if (nodes_.empty()) {
        for (std::size_t i = 0; i < source_.size(); ++i) {
            double sq = (source_[i] - x).squaredNorm();
            if (sq < best_sq) {
                best_sq = sq;
                best.index = i;
            }
        }
    } else {
        search(0, x, best, best_sq);
    }
    best.distance = std::sqrt(best_sq);
    return best;
}

Vec DistanceIndex::gradient(const Vec& x) const
{
    const auto near = nearest(x);
    if (near.distance > gradient_epsilon)
        return (x - source_[near.index]) / near.distance;

    Vec g(dim());
    for (int k = 0; k < dim(); ++k) {
        Vec xp = x, xm = x;
        xp[k] += dx_;
        xm[k] -= dx_;
        g[k] = (distance(xp) - distance(xm)) / (2.0 * dx_);
    }
    const double n = g.norm();
    if (n > 1.0) g /= n;
    return g;
}

} // namespace slrecon
