#pragma once

#include "slrecon/geometry.hpp"

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace slrecon {

enum class KernelKind { Linear, Multiquadric };

// Radial term phi of the reconstruction: phi(t) = t or sqrt(t^2 + rho^2).
struct KernelSpec {
    KernelKind kind = KernelKind::Multiquadric;
    double rho = 1.0;

    static KernelSpec linear() { return {KernelKind::Linear, 0.0}; }
    static KernelSpec multiquadric(double rho);

    double phi(double t) const;
    // rho^2 for the multiquadric, 0 for the linear kernel; both kernels are
    // sqrt(t^2 + shift) so the evaluation loops are shared.
    double shift() const { return kind == KernelKind::Multiquadric ? rho * rho : 0.0; }
};

KernelKind parse_kernel(const std::string& name);
std::string kernel_name(KernelKind kind);

// Structure-of-arrays copy of the RBF centers.
struct CenterCloud {
    int dim = 0;
    std::vector<double> coord[3];

    std::size_t size() const { return coord[0].size(); }
    Vec at(std::size_t i) const;

    static CenterCloud from(std::span<const Vec> points);
};

class SingularSystemError : public Error {
public:
    SingularSystemError(const std::string& msg, double rcond) : Error(msg), rcond_(rcond) {}
    double rcond() const { return rcond_; }

private:
    double rcond_;
};

class Interpolant;

// LU factorization of the saddle-point system
//
//   [ Phi  P ] [lambda]   [u]
//   [ P^T  0 ] [ c0,c ] = [0],     Phi_ij = phi(|x_i - x_j|),  P_i = (1, x_i),
//
// built once per node geometry and reused for every right-hand side.
class Factorization {
public:
    static constexpr double min_rcond = 1e-14;

    Factorization(std::span<const Vec> centers, KernelSpec kernel);

    const KernelSpec& kernel() const { return kernel_; }
    const std::shared_ptr<const CenterCloud>& centers() const { return centers_; }
    std::size_t size() const { return centers_->size(); }
    int dim() const { return centers_->dim; }
    double rcond() const { return rcond_; }

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

private:
    struct Lu;

    KernelSpec kernel_;
    std::shared_ptr<const CenterCloud> centers_;
    // Shared so copies of a factorization are cheap; the LU is read-only.
    std::shared_ptr<const Lu> lu_;
    double rcond_ = 0.0;
};

inline Factorization assemble(std::span<const Vec> centers, KernelSpec kernel)
{
    return Factorization(centers, kernel);
}

// I[u](x) = c0 + c.x + sum_i lambda_i phi(|x - x_i|)
class Interpolant {
public:
    Interpolant(std::shared_ptr<const CenterCloud> centers, KernelSpec kernel,
                Eigen::VectorXd lambda, double c0, Vec c);

    int dim() const { return centers_->dim; }
    const CenterCloud& centers() const { return *centers_; }
    const KernelSpec& kernel() const { return kernel_; }
    const Eigen::VectorXd& lambda() const { return lambda_; }
    double c0() const { return c0_; }
    const Vec& c() const { return c_; }

    double eval(const Vec& x) const;
    // For the linear kernel a center coinciding with x contributes zero.
    Vec eval_gradient(const Vec& x) const;

    // Evaluates at many points; data-parallel.
    std::vector<double> eval_many(std::span<const Vec> xs) const;

private:
    std::shared_ptr<const CenterCloud> centers_;
    KernelSpec kernel_;
    Eigen::VectorXd lambda_;
    double c0_;
    Vec c_;
};

Interpolant fit(const Factorization& fact, std::span<const double> values);

} // namespace slrecon
