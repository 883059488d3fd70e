#include "slrecon/scheme.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

namespace slrecon {

double SchemeConfig::singular_threshold() const
{
    return singular_c * std::pow(dt, singular_alpha);
}

void SchemeConfig::validate() const
{
    if (!(dt > 0.0)) throw Error("time step must be positive");
    if (!(singular_c > 0.0)) throw Error("singular threshold constant must be positive");
    if (!(singular_alpha > 0.0)) throw Error("singular threshold exponent must be positive");
    if (max_iterations < 0) throw Error("iteration count must be nonnegative");
    if (!(stop_tolerance >= 0.0)) throw Error("stop tolerance must be nonnegative");
    if (!(range_lo <= range_hi)) throw Error("limiter range is empty");
}

Limiter parse_limiter(const std::string& name)
{
    if (name == "off") return Limiter::Off;
    if (name == "range") return Limiter::Range;
    if (name == "local") return Limiter::Local;
    throw Error("unknown limiter '" + name + "' (expected off, range or local)");
}

std::string limiter_name(Limiter l)
{
    switch (l) {
    case Limiter::Off: return "off";
    case Limiter::Range: return "range";
    case Limiter::Local: return "local";
    }
    return "off";
}

TangentFrame tangent2d(const Vec& grad)
{
    TangentFrame f;
    const double n = grad.norm();
    if (n == 0.0) {
        f.degenerate = true;
        f.sigma = Vec::Zero(2);
        return f;
    }
    f.sigma = make_vec(grad[1] / n, -grad[0] / n);
    return f;
}

TangentFrame tangent3d(const Vec& grad)
{
    TangentFrame f;
    const double n = grad.norm();
    const double s = std::hypot(grad[0], grad[2]);
    if (s == 0.0) {
        f.nu1 = make_vec(1.0, 0.0, 0.0);
        f.nu2 = make_vec(0.0, 0.0, 1.0);
        f.degenerate = (n == 0.0);
        return f;
    }
    f.nu1 = make_vec(-grad[2] / s, 0.0, grad[0] / s);
    f.nu2 = make_vec(-grad[0] * grad[1] / s, s, -grad[1] * grad[2] / s) / n;
    return f;
}

CoefficientField sample_coefficients(const NodeSet& nodes, const DistanceIndex* index, const SchemeConfig& cfg)
{
    CoefficientField c;
    const std::size_t n = nodes.interior_size();
    if (cfg.override_coefficients) {
        c.distance.assign(n, 1.0);
        c.gradient.assign(n, Vec::Zero(nodes.dim));
        return c;
    }
    if (!index) throw Error("a distance index is required unless the coefficient override is set");
    if (index->dim() != nodes.dim) throw Error("distance index dimension does not match the node set");
    c.distance.resize(n);
    c.gradient.resize(n);
    const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(static)
    for (long j = 0; j < count; ++j) {
        c.distance[j] = index->distance(nodes.interior[j]);
        c.gradient[j] = index->gradient(nodes.interior[j]);
    }
    if (cfg.limiter == Limiter::Local) build_limiter_stencils(nodes, c, cfg);
    return c;
}

void build_limiter_stencils(const NodeSet& nodes, CoefficientField& coeffs, const SchemeConfig& cfg)
{
    const std::size_t n = nodes.interior_size();
    if (coeffs.distance.size() != n || coeffs.gradient.size() != n)
        throw Error("coefficient field does not match the node set");
    const auto centers = nodes.centers();
    coeffs.neighbors.assign(n, {});
    const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 64)
    for (long j = 0; j < count; ++j) {
        const double a = std::sqrt(2.0 * cfg.dt * coeffs.distance[j]);
        const double r = cfg.dt * coeffs.gradient[j].norm() + std::sqrt(2.0) * a + nodes.dx;
        const double r2 = r * r * (1.0 + 1e-12);
        auto& nb = coeffs.neighbors[j];
        for (std::size_t i = 0; i < centers.size(); ++i)
            if ((centers[i] - nodes.interior[j]).squaredNorm() <= r2) nb.push_back(static_cast<int>(i));
    }
}

namespace {

Vec axis(int dim, int k)
{
    Vec e = Vec::Zero(dim);
    e[k] = 1.0;
    return e;
}

bool tangential(const Vec& grad, const SchemeConfig& cfg)
{
    return grad.norm() >= cfg.singular_threshold();
}

} // namespace

NodeUpdate update_node(const Interpolant& itp, const Vec& x, double d, const Vec& dd, const SchemeConfig& cfg)
{
    const int dim = static_cast<int>(x.size());
    const Vec y = x + cfg.dt * dd;
    const Vec grad = itp.eval_gradient(x);
    const double a = std::sqrt(2.0 * cfg.dt * d);

    if (tangential(grad, cfg)) {
        if (dim == 2) {
            const Vec h = a * tangent2d(grad).sigma;
            return {0.5 * itp.eval(y + h) + 0.5 * itp.eval(y - h), Branch::Tangential};
        }
        const auto f = tangent3d(grad);
        const Vec h1 = a * (f.nu1 + f.nu2);
        const Vec h2 = a * (f.nu1 - f.nu2);
        double s = itp.eval(y + h1) + itp.eval(y - h1) + itp.eval(y + h2) + itp.eval(y - h2);
        return {0.25 * s, Branch::Tangential};
    }

    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
        const Vec h = a * axis(dim, k);
        s += itp.eval(y + h) + itp.eval(y - h);
    }
    return {s / (2.0 * dim), Branch::Isotropic};
}

double update_node_incremental(const Interpolant& itp, const Vec& x, double u, double d, const Vec& dd,
                               const SchemeConfig& cfg)
{
    const int dim = static_cast<int>(x.size());
    const double dt = cfg.dt;
    const Vec y = x + dt * dd;
    const Vec grad = itp.eval_gradient(x);
    const double a = std::sqrt(2.0 * dt * d);
    const double center = itp.eval(y);

    auto second_difference = [&](const Vec& h) {
        const double h2 = h.squaredNorm();
        if (h2 == 0.0) return 0.0;
        return d / h2 * (itp.eval(y + h) - 2.0 * center + itp.eval(y - h));
    };

    double diffusion = 0.0;
    if (tangential(grad, cfg)) {
        if (dim == 2) {
            diffusion = second_difference(a * tangent2d(grad).sigma);
        } else {
            const auto f = tangent3d(grad);
            diffusion = second_difference(a * (f.nu1 + f.nu2)) + second_difference(a * (f.nu1 - f.nu2));
        }
    } else if (a > 0.0) {
        // 5-point (2D) / 7-point (3D) laplacian with increment |h| = a
        double s = 0.0;
        for (int k = 0; k < dim; ++k) {
            const Vec h = a * axis(dim, k);
            s += itp.eval(y + h) + itp.eval(y - h);
        }
        diffusion = d / ((dim == 2 ? 2.0 : 3.0) * a * a) * (s - 2.0 * dim * center);
    }
    const double transport = (center - u) / dt;
    return u + dt * (diffusion + transport);
}

namespace {

LevelSetState step_impl(int dim, const LevelSetState& state, const Interpolant& itp, const NodeSet& nodes,
                        const CoefficientField& coeffs, const SchemeConfig& cfg)
{
    if (nodes.dim != dim || itp.dim() != dim) throw Error("scheme dimension mismatch");
    const std::size_t n = nodes.interior_size();
    if (state.values.size() != n || coeffs.distance.size() != n || coeffs.gradient.size() != n)
        throw Error("state or coefficient field does not match the node set");

    LevelSetState next;
    next.values.resize(n);
    next.iteration = state.iteration + 1;
    next.history = state.history;

    const bool limit = cfg.limiter == Limiter::Local && coeffs.neighbors.size() == n;
    const bool clip = cfg.limiter == Limiter::Range;
    std::vector<double> all;
    if (limit) {
        all = state.values;
        all.resize(nodes.size(), nodes.anchor_value);
    }

    std::vector<Branch> branches(n);
    std::atomic<long> bad{-1};
    const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 64)
    for (long j = 0; j < count; ++j) {
        auto up = update_node(itp, nodes.interior[j], coeffs.distance[j], coeffs.gradient[j], cfg);
        if (limit && std::isfinite(up.value)) {
            double lo = state.values[j], hi = lo;
            if (!nodes.anchors.empty()) {
                lo = std::min(lo, nodes.anchor_value);
                hi = std::max(hi, nodes.anchor_value);
            }
            for (int i : coeffs.neighbors[j]) {
                lo = std::min(lo, all[i]);
                hi = std::max(hi, all[i]);
            }
            up.value = std::clamp(up.value, lo, hi);
        }
        if (clip && std::isfinite(up.value)) up.value = std::clamp(up.value, cfg.range_lo, cfg.range_hi);
        next.values[j] = up.value;
        branches[j] = up.branch;
        if (!std::isfinite(up.value)) {
            long expected = -1;
            bad.compare_exchange_strong(expected, j);
        }
    }
    if (bad >= 0) {
        const long j = bad;
        std::ostringstream msg;
        msg << "non-finite update at node " << j << " (iteration " << next.iteration << ", "
            << (branches[j] == Branch::Tangential ? "tangential" : "isotropic") << " branch)";
        throw SchemeError(msg.str());
    }
    return next;
}

} // namespace

LevelSetState step2d(const LevelSetState& state, const Interpolant& itp, const NodeSet& nodes,
                     const CoefficientField& coeffs, const SchemeConfig& cfg)
{
    return step_impl(2, state, itp, nodes, coeffs, cfg);
}

LevelSetState step3d(const LevelSetState& state, const Interpolant& itp, const NodeSet& nodes,
                     const CoefficientField& coeffs, const SchemeConfig& cfg)
{
    return step_impl(3, state, itp, nodes, coeffs, cfg);
}

LevelSetState step(const LevelSetState& state, const Interpolant& itp, const NodeSet& nodes,
                   const CoefficientField& coeffs, const SchemeConfig& cfg)
{
    return nodes.dim == 2 ? step2d(state, itp, nodes, coeffs, cfg) : step3d(state, itp, nodes, coeffs, cfg);
}

double update_metric(std::span<const double> u_next, std::span<const double> u_prev)
{
    if (u_next.size() != u_prev.size()) throw Error("update metric: length mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < u_prev.size(); ++j) {
        num += std::abs(u_next[j] - u_prev[j]);
        den += std::abs(u_prev[j]);
    }
    if (!(den > 0.0)) throw Error("update metric: previous iterate is identically zero");
    return num / den;
}

RunResult run(const NodeSet& nodes, const Factorization& fact, const CoefficientField& coeffs,
              const SchemeConfig& config, LevelSetState u0, const StepObserver& observer)
{
    config.validate();
    if (fact.size() != nodes.size()) throw Error("factorization does not match the node set");
    auto cfg = config;
    if (cfg.limiter == Limiter::Range && !u0.values.empty()) {
        const auto [lo, hi] = std::minmax_element(u0.values.begin(), u0.values.end());
        double a = *lo, b = *hi;
        if (!nodes.anchors.empty()) {
            a = std::min(a, nodes.anchor_value);
            b = std::max(b, nodes.anchor_value);
        }
        if (std::isinf(cfg.range_lo)) cfg.range_lo = a;
        if (std::isinf(cfg.range_hi)) cfg.range_hi = b;
    }
    RunResult result;
    result.state = std::move(u0);
    for (int n = 0; n < cfg.max_iterations; ++n) {
        try {
            const auto itp = fit(fact, center_values(nodes, result.state));
            auto next = step(result.state, itp, nodes, coeffs, cfg);
            const double e1 = update_metric(next.values, result.state.values);
            next.history.push_back(e1);
            result.state = std::move(next);
        } catch (const Error& e) {
            result.failure = e.what();
            return result;
        }
        if (observer) observer(result.state);
        if (result.state.history.back() < cfg.stop_tolerance) break;
    }
    return result;
}

RunResult run(const NodeSet& nodes, const DistanceIndex* index, const KernelSpec& kernel, const SchemeConfig& cfg,
              LevelSetState u0, const StepObserver& observer)
{
    cfg.validate();
    const auto coeffs = sample_coefficients(nodes, index, cfg);
    const auto centers = nodes.centers();
    const Factorization fact(centers, kernel);
    return run(nodes, fact, coeffs, cfg, std::move(u0), observer);
}

} // namespace slrecon
