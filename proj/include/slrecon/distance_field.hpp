#pragma once

#include "slrecon/pointcloud.hpp"

#include <cstdint>
#include <vector>

namespace slrecon {

// Nearest-point queries against a data set S, providing the coefficient
// fields d(x) = dist(x, S) and Dd(x) of the reconstruction flow.
//
// Backed by a k-d tree; sets smaller than `brute_force_below` are scanned
// linearly. Immutable after construction, so concurrent queries are safe.
class DistanceIndex {
public:
    static constexpr std::size_t brute_force_below = 32;
    // Below this distance Dd falls back to centered differences.
    static constexpr double gradient_epsilon = 1e-9;

    DistanceIndex(PointSet source, double dx);

    const PointSet& source() const { return source_; }
    int dim() const { return source_.dim(); }
    double dx() const { return dx_; }

    struct Nearest {
        std::size_t index;
        double distance;
    };

    Nearest nearest(const Vec& x) const;
    double distance(const Vec& x) const { return nearest(x).distance; }

    // Unit direction away from the nearest point when d(x) > gradient_epsilon,
    // otherwise the centered-difference gradient of d with spacing dx,
    // rescaled to norm 1 if it exceeds it.
    Vec gradient(const Vec& x) const;

private:
    struct Node {
        // Leaf when split_dim < 0; then [begin, end) indexes order_.
        int split_dim = -1;
        double split = 0.0;
        std::uint32_t begin = 0, end = 0;
        std::uint32_t left = 0, right = 0;
    };

    std::uint32_t build(std::uint32_t begin, std::uint32_t end);
    void search(std::uint32_t node, const Vec& x, Nearest& best, double& best_sq) const;

    PointSet source_;
    double dx_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
};

} // namespace slrecon
