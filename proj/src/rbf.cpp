#include "slrecon/rbf.hpp"

#include <cmath>
#include <sstream>

namespace slrecon {

KernelSpec KernelSpec::multiquadric(double rho)
{
    if (!(rho > 0.0)) throw Error("multiquadric shape parameter must be positive");
    return {KernelKind::Multiquadric, rho};
}

double KernelSpec::phi(double t) const
{
    return kind == KernelKind::Multiquadric ? std::sqrt(t * t + rho * rho) : t;
}

KernelKind parse_kernel(const std::string& name)
{
    if (name == "linear") return KernelKind::Linear;
    if (name == "multiquadric") return KernelKind::Multiquadric;
    throw Error("unknown kernel '" + name + "' (expected linear or multiquadric)");
}

std::string kernel_name(KernelKind kind)
{
    return kind == KernelKind::Linear ? "linear" : "multiquadric";
}

Vec CenterCloud::at(std::size_t i) const
{
    Vec v(dim);
    for (int k = 0; k < dim; ++k) v[k] = coord[k][i];
    return v;
}

CenterCloud CenterCloud::from(std::span<const Vec> points)
{
    CenterCloud c;
    if (points.empty()) return c;
    c.dim = static_cast<int>(points[0].size());
    for (int k = 0; k < c.dim; ++k) c.coord[k].reserve(points.size());
    for (const auto& p : points) {
        if (p.size() != c.dim) throw Error("RBF centers have mixed dimensions");
        for (int k = 0; k < c.dim; ++k) c.coord[k].push_back(p[k]);
    }
    return c;
}

struct Factorization::Lu {
    Eigen::MatrixXd storage;
    Eigen::PartialPivLU<Eigen::Ref<Eigen::MatrixXd>> lu;

    explicit Lu(Eigen::MatrixXd a) : storage(std::move(a)), lu(storage) {}
};

Factorization::Factorization(std::span<const Vec> centers, KernelSpec kernel)
    : kernel_(kernel),
      centers_(std::make_shared<const CenterCloud>(CenterCloud::from(centers)))
{
    if (kernel_.kind == KernelKind::Multiquadric && !(kernel_.rho > 0.0))
        throw Error("multiquadric shape parameter must be positive");
    const auto& cc = *centers_;
    const int dim = cc.dim;
    const auto m = static_cast<Eigen::Index>(cc.size());
    if (m < dim + 1)
        throw Error("RBF system needs at least dim + 1 centers, got " + std::to_string(m));

    const Eigen::Index n = m + dim + 1;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index i = j; i < m; ++i) {
            double r2 = 0.0;
            for (int k = 0; k < dim; ++k) {
                double d = cc.coord[k][i] - cc.coord[k][j];
                r2 += d * d;
            }
            double v = kernel_.phi(std::sqrt(r2));
            a(i, j) = v;
            a(j, i) = v;
        }
        a(j, m) = a(m, j) = 1.0;
        for (int k = 0; k < dim; ++k) a(j, m + 1 + k) = a(m + 1 + k, j) = cc.coord[k][j];
    }

    auto lu = std::make_shared<Lu>(std::move(a));
    rcond_ = lu->lu.rcond();
    // The estimate can miss an exactly zero pivot (e.g. collinear centers).
    const auto diag = lu->lu.matrixLU().diagonal().cwiseAbs();
    if (!diag.allFinite() || diag.minCoeff() <= min_rcond * diag.maxCoeff()) rcond_ = 0.0;
    if (!(rcond_ >= min_rcond)) {
        std::ostringstream msg;
        msg << "RBF interpolation matrix is singular (reciprocal condition estimate " << rcond_
            << "); check for duplicate or degenerate nodes";
        throw SingularSystemError(msg.str(), rcond_);
    }
    lu_ = std::move(lu);
}

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& rhs) const
{
    return lu_->lu.solve(rhs);
}

Interpolant fit(const Factorization& fact, std::span<const double> values)
{
    const auto m = static_cast<Eigen::Index>(fact.size());
    const int dim = fact.dim();
    if (static_cast<Eigen::Index>(values.size()) != m)
        throw Error("fit: expected " + std::to_string(m) + " values, got " + std::to_string(values.size()));

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + dim + 1);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (!std::isfinite(values[i])) throw Error("fit: non-finite nodal value at " + std::to_string(i));
        rhs[i] = values[i];
    }
    Eigen::VectorXd sol = fact.solve(rhs);
    if (!sol.allFinite()) throw Error("fit: RBF solve produced non-finite coefficients");

    Vec c(dim);
    for (int k = 0; k < dim; ++k) c[k] = sol[m + 1 + k];
    return Interpolant(fact.centers(), fact.kernel(), sol.head(m), sol[m], c);
}

Interpolant::Interpolant(std::shared_ptr<const CenterCloud> centers, KernelSpec kernel,
                         Eigen::VectorXd lambda, double c0, Vec c)
    : centers_(std::move(centers)), kernel_(kernel), lambda_(std::move(lambda)), c0_(c0), c_(std::move(c))
{
}

double Interpolant::eval(const Vec& x) const
{
    const auto& cc = *centers_;
    const std::size_t m = cc.size();
    const double shift = kernel_.shift();
    const double* lam = lambda_.data();
    const double* cx = cc.coord[0].data();
    const double* cy = cc.coord[1].data();
    double s = 0.0;
    if (cc.dim == 2) {
        const double px = x[0], py = x[1];
#pragma omp simd reduction(+ : s)
        for (std::size_t i = 0; i < m; ++i) {
            double dx = px - cx[i], dy = py - cy[i];
            s += lam[i] * std::sqrt(dx * dx + dy * dy + shift);
        }
    } else {
        const double* cz = cc.coord[2].data();
        const double px = x[0], py = x[1], pz = x[2];
#pragma omp simd reduction(+ : s)
        for (std::size_t i = 0; i < m; ++i) {
            double dx = px - cx[i], dy = py - cy[i], dz = pz - cz[i];
            s += lam[i] * std::sqrt(dx * dx + dy * dy + dz * dz + shift);
        }
    }
    return c0_ + c_.dot(x) + s;
}

Vec Interpolant::eval_gradient(const Vec& x) const
{
    const auto& cc = *centers_;
    const std::size_t m = cc.size();
    const double shift = kernel_.shift();
    const double* lam = lambda_.data();
    const double* cx = cc.coord[0].data();
    const double* cy = cc.coord[1].data();
    // d/dx sqrt(r^2 + shift) = (x - x_i) / sqrt(r^2 + shift)
    double gx = 0.0, gy = 0.0, gz = 0.0;
    if (cc.dim == 2) {
        const double px = x[0], py = x[1];
#pragma omp simd reduction(+ : gx, gy)
        for (std::size_t i = 0; i < m; ++i) {
            double dx = px - cx[i], dy = py - cy[i];
            double r = std::sqrt(dx * dx + dy * dy + shift);
            double w = r > 0.0 ? lam[i] / r : 0.0;
            gx += w * dx;
            gy += w * dy;
        }
        return make_vec(c_[0] + gx, c_[1] + gy);
    }
    const double* cz = cc.coord[2].data();
    const double px = x[0], py = x[1], pz = x[2];
#pragma omp simd reduction(+ : gx, gy, gz)
    for (std::size_t i = 0; i < m; ++i) {
        double dx = px - cx[i], dy = py - cy[i], dz = pz - cz[i];
        double r = std::sqrt(dx * dx + dy * dy + dz * dz + shift);
        double w = r > 0.0 ? lam[i] / r : 0.0;
        gx += w * dx;
        gy += w * dy;
        gz += w * dz;
    }
    return make_vec(c_[0] + gx, c_[1] + gy, c_[2] + gz);
}

std::vector<double> Interpolant::eval_many(std::span<const Vec> xs) const
{
    std::vector<double> out(xs.size());
    const auto n = static_cast<long>(xs.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[i] = eval(xs[i]);
    return out;
}

} // namespace slrecon
