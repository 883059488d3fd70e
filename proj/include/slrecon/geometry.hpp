#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace slrecon {

// Coordinate vector of dimension 2 or 3. Fixed capacity, so no heap traffic.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

inline Vec make_vec(double x, double y) { Vec v(2); v << x, y; return v; }
inline Vec make_vec(double x, double y, double z) { Vec v(3); v << x, y, z; return v; }

// Axis-aligned box [lo, hi] per axis.
struct Box {
    Vec lo;
    Vec hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Vec& x, double tol = 0.0) const;
    double diameter() const { return (hi - lo).norm(); }

    static Box cube(int dim, double lo, double hi);
};

inline Box Box::cube(int dim, double lo, double hi)
{
    Box b{Vec::Constant(dim, lo), Vec::Constant(dim, hi)};
    return b;
}

inline bool Box::contains(const Vec& x, double tol) const
{
    for (int k = 0; k < dim(); ++k)
        if (x[k] < lo[k] - tol || x[k] > hi[k] + tol) return false;
    return true;
}

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace slrecon
