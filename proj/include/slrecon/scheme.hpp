#pragma once

#include "slrecon/distance_field.hpp"
#include "slrecon/gridding.hpp"
#include "slrecon/rbf.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace slrecon {

enum class Limiter { Off, Range, Local };

Limiter parse_limiter(const std::string& name);
std::string limiter_name(Limiter l);

struct SchemeConfig {
    double dt = 0.01;
    // Nodes with |D u| < singular_c * dt^singular_alpha take the isotropic branch.
    double singular_c = 1.0;
    double singular_alpha = 0.5;
    int max_iterations = 150;
    // Stop once E^n_1 drops below this value; 0 means run all iterations.
    double stop_tolerance = 0.0;
    // Test mode: replace the coefficient fields by d = 1, Dd = 0 (pure mean
    // curvature flow).
    bool override_coefficients = false;
    // Clipping of updated values.
    //   Range: to [range_lo, range_hi]; run() fills unset bounds from the
    //          initial state and the anchor value.
    //   Local: to the range of the nodal values around the node (all centers
    //          within dt |Dd| + sqrt(2) a + dx, and the anchor value, which the
    //          interpolant approaches across node-free gaps).
    // RBF reconstruction is not monotone, and near-coincident node pairs
    // otherwise amplify the transport step.
    Limiter limiter = Limiter::Local;
    double range_lo = -std::numeric_limits<double>::infinity();
    double range_hi = std::numeric_limits<double>::infinity();

    double singular_threshold() const;
    void validate() const;
};

// Tangent directions to the level set through a node.
//   2D: sigma = (D2, -D1) / |D|
//   3D: (nu1, nu2), an orthonormal basis of the plane orthogonal to D, or
//       (e1, e3) when D1 = D3 = 0.
struct TangentFrame {
    Vec sigma;
    Vec nu1;
    Vec nu2;
    bool degenerate = false;
};

TangentFrame tangent2d(const Vec& grad);
TangentFrame tangent3d(const Vec& grad);

// d(x_j) and Dd(x_j) at every interior node. Fixed for the whole evolution.
struct CoefficientField {
    std::vector<double> distance;
    std::vector<Vec> gradient;
    // Limiter stencils: indices into NodeSet::centers(). Empty disables the
    // limiter.
    std::vector<std::vector<int>> neighbors;
};

// Fills coeffs.neighbors for the given node set and configuration.
void build_limiter_stencils(const NodeSet& nodes, CoefficientField& coeffs, const SchemeConfig& cfg);

// Samples the distance field at the interior nodes, or the constant override
// fields when cfg.override_coefficients is set (index may then be null).
CoefficientField sample_coefficients(const NodeSet& nodes, const DistanceIndex* index, const SchemeConfig& cfg);

enum class Branch { Tangential, Isotropic };

struct NodeUpdate {
    double value;
    Branch branch;
};

// One node of the scheme, written as the average of interpolated values at
// the displaced points y +- h (2D: two tangential samples or four isotropic
// ones; 3D: four tangential or six isotropic), y = x + dt Dd(x).
NodeUpdate update_node(const Interpolant& itp, const Vec& x, double d, const Vec& dd, const SchemeConfig& cfg);

// The same update in incremental form: the current value plus dt times a
// second-difference (diffusion) term and an upwind transport term. Agrees
// with update_node up to roundoff; kept as an independent check.
double update_node_incremental(const Interpolant& itp, const Vec& x, double u, double d, const Vec& dd,
                               const SchemeConfig& cfg);

class SchemeError : public Error {
public:
    using Error::Error;
};

// Advances every interior node by one step; anchors are untouched.
LevelSetState step2d(const LevelSetState& state, const Interpolant& itp, const NodeSet& nodes,
                     const CoefficientField& coeffs, const SchemeConfig& cfg);
LevelSetState step3d(const LevelSetState& state, const Interpolant& itp, const NodeSet& nodes,
                     const CoefficientField& coeffs, const SchemeConfig& cfg);
LevelSetState step(const LevelSetState& state, const Interpolant& itp, const NodeSet& nodes,
                   const CoefficientField& coeffs, const SchemeConfig& cfg);

// E = sum |u_next - u_prev| / sum |u_prev|
double update_metric(std::span<const double> u_next, std::span<const double> u_prev);

struct RunResult {
    LevelSetState state;
    // Set when a step failed; state then holds the last good iterate.
    std::optional<std::string> failure;

    const std::vector<double>& history() const { return state.history; }
};

// Called after every completed iteration with the new state.
using StepObserver = std::function<void(const LevelSetState&)>;

RunResult run(const NodeSet& nodes, const Factorization& fact, const CoefficientField& coeffs,
              const SchemeConfig& cfg, LevelSetState u0, const StepObserver& observer = {});

RunResult run(const NodeSet& nodes, const DistanceIndex* index, const KernelSpec& kernel, const SchemeConfig& cfg,
              LevelSetState u0, const StepObserver& observer = {});

} // namespace slrecon
