#pragma once

#include "slrecon/geometry.hpp"
#include "slrecon/pointcloud.hpp"

#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace testing {

using slrecon::Vec;

inline Vec random_vec(std::mt19937_64& rng, int dim, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    Vec v(dim);
    for (int k = 0; k < dim; ++k) v[k] = u(rng);
    return v;
}

inline std::vector<Vec> random_points(std::mt19937_64& rng, int dim, std::size_t n, double lo, double hi)
{
    std::vector<Vec> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(random_vec(rng, dim, lo, hi));
    return out;
}

// Linear scan; the oracle for the distance module.
inline double brute_distance(const std::vector<Vec>& pts, const Vec& x)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) best = std::min(best, (p - x).norm());
    return best;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("slrecon_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testing
