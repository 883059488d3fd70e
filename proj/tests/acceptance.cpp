// Acceptance checks: one PASS/FAIL line per criterion.
#include "support.hpp"

#include "slrecon/parallel.hpp"
#include "slrecon/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

using namespace slrecon;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail)
{
    std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    failures += !ok;
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

bool all_finite(const std::vector<double>& v)
{
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

double max_data_distance(const ExperimentReport& r)
{
    double worst = 0.0;
    if (r.nodes.dim == 2) {
        for (const auto& p : r.data) worst = std::max(worst, distance_to_curve(p, r.curve));
    } else {
        const MeshDistance md(r.mesh);
        for (const auto& p : r.data) worst = std::max(worst, md(p));
    }
    return worst;
}

// Least-squares slope of log E^n over n in [first, last].
double log_slope(const std::vector<double>& h, int first, int last)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int n = first; n <= last; ++n) {
        const double y = std::log(h[n - 1]);
        sx += n, sy += y, sxx += double(n) * n, sxy += n * y, ++m;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

ExperimentReport run_preset(const std::string& name)
{
    auto cfg = *find_preset(name);
    cfg.output_dir.clear();
    return run_experiment(cfg);
}

// ---------------------------------------------------------------------------

void criterion1()
{
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> size(10, 200);
    std::uniform_real_distribution<double> val(-10, 10);
    double worst_res = 0, worst_moment = 0, worst_affine = 0;
    for (int set = 0; set < 200; ++set) {
        const int dim = 2 + set % 2;
        const auto kernel = (set / 2) % 2 ? KernelSpec::linear() : KernelSpec::multiquadric(0.3);
        const auto centers = testing::random_points(rng, dim, size(rng), -2, 2);
        const Factorization fact(centers, kernel);

        std::vector<double> u(centers.size());
        for (auto& v : u) v = val(rng);
        const auto itp = fit(fact, u);
        double umax = 0;
        for (double v : u) umax = std::max(umax, std::abs(v));
        for (std::size_t i = 0; i < centers.size(); ++i)
            worst_res = std::max(worst_res, std::abs(itp.eval(centers[i]) - u[i]) / umax);
        const auto& lam = itp.lambda();
        const double lsum = lam.cwiseAbs().sum();
        worst_moment = std::max(worst_moment, std::abs(lam.sum()) / lsum);
        for (int k = 0; k < dim; ++k) {
            double m = 0;
            for (std::size_t i = 0; i < centers.size(); ++i) m += lam[i] * centers[i][k];
            worst_moment = std::max(worst_moment, std::abs(m) / (2.0 * lsum));
        }

        const Vec c = testing::random_vec(rng, dim, -1, 1);
        const double c0 = val(rng);
        std::vector<double> a;
        for (const auto& x : centers) a.push_back(c0 + c.dot(x));
        const auto aff = fit(fact, a);
        for (int q = 0; q < 50; ++q) {
            const Vec x = testing::random_vec(rng, dim, -2, 2);
            worst_affine = std::max(worst_affine, std::abs(aff.eval(x) - (c0 + c.dot(x))));
        }
    }
    report(1, worst_res <= 1e-8 && worst_moment <= 1e-8 && worst_affine <= 1e-9,
           fmt("RBF exactness: residual %.2e, moments %.2e (<= 1e-8), affine %.2e (<= 1e-9)", worst_res,
               worst_moment, worst_affine));
}

void criterion2()
{
    std::mt19937_64 rng(102);
    std::uniform_real_distribution<double> dist(0.0, 1.0), val(-1, 1);
    SchemeConfig cfg;
    cfg.limiter = Limiter::Off;
    double worst[2] = {0, 0};
    std::size_t nodes_checked = 0;
    for (int dim : {2, 3}) {
        const auto grid = build_full_grid(Box::cube(dim, -2, 2), dim == 2 ? 15 : 7);
        for (auto kernel : {KernelSpec::linear(), KernelSpec::multiquadric(grid.dx)}) {
            const Factorization fact(grid.interior, kernel);
            for (int state = 0; state < 5; ++state) {
                std::vector<double> u;
                for (const auto& x : grid.interior) u.push_back(x.squaredNorm() - 2.0 + val(rng));
                const auto itp = fit(fact, u);
                for (std::size_t j = 0; j < grid.interior_size(); ++j) {
                    Vec dd = testing::random_vec(rng, dim, -1, 1);
                    if (dd.norm() > 1) dd.normalize();
                    const double d = dist(rng);
                    const Vec& x = grid.interior[j];
                    const double a = update_node(itp, x, d, dd, cfg).value;
                    const double b = update_node_incremental(itp, x, u[j], d, dd, cfg);
                    worst[dim - 2] = std::max(worst[dim - 2], std::abs(a - b) / (1.0 + std::abs(a)));
                    ++nodes_checked;
                }
            }
        }
    }
    report(2, worst[0] <= 1e-12 && worst[1] <= 1e-12,
           fmt("form equivalence over %zu nodes: 2D %.2e, 3D %.2e (<= 1e-12)", nodes_checked, worst[0], worst[1]));
}

double mean_radius(const std::vector<Vec>& vs)
{
    double s = 0;
    for (const auto& v : vs) s += v.norm();
    return vs.empty() ? 0.0 : s / vs.size();
}

// Mean-curvature flow of a sphere of radius r0 on a full lattice; returns the
// worst relative radius error over the sampled times.
double mcf_error(int dim, int lattice, double r0, double dt, int resolution)
{
    const auto nodes = build_full_grid(Box::cube(dim, -2, 2), lattice);
    SchemeConfig cfg;
    cfg.dt = dt;
    cfg.override_coefficients = true;
    cfg.limiter = Limiter::Off;
    const double t_end = 0.2 * r0 * r0 / 2.0;
    cfg.max_iterations = static_cast<int>(std::lround(t_end / dt));
    const auto coeffs = sample_coefficients(nodes, nullptr, cfg);
    const Factorization fact(nodes.centers(), KernelSpec::multiquadric(nodes.dx));
    const int every = std::max(1, cfg.max_iterations / 5);
    double worst = 0.0;
    auto measure = [&](const LevelSetState& s) {
        if (s.iteration % every != 0 && s.iteration != cfg.max_iterations) return;
        const auto itp = fit(fact, center_values(nodes, s));
        std::vector<Vec> vs;
        if (dim == 2) {
            for (const auto& l : contour2d(itp, nodes.domain, resolution).loops)
                vs.insert(vs.end(), l.vertices.begin(), l.vertices.end());
        } else {
            vs = isosurface3d(itp, nodes.domain, resolution).vertices;
        }
        const double t = s.iteration * dt;
        const double exact = std::sqrt(r0 * r0 - 2.0 * (dim - 1) * t);
        worst = std::max(worst, std::abs(mean_radius(vs) - exact) / exact);
    };
    const auto result = run(nodes, fact, coeffs, cfg, initial_condition(nodes, r0, Vec::Zero(dim)).state, measure);
    return result.failure ? INFINITY : worst;
}

void criterion3()
{
    const double e2 = mcf_error(2, 30, 1.0, 0.001, 200);
    const double e3 = mcf_error(3, 16, 1.2, 0.004, 64);
    report(3, e2 <= 0.05 && e3 <= 0.05,
           fmt("mean-curvature radius error: circle %.2f%%, sphere %.2f%% (<= 5%%)", 100 * e2, 100 * e3));
}

void criterion10()
{
    std::mt19937_64 rng(110);
    const auto pts = testing::random_points(rng, 3, 10000, -2, 2);
    const DistanceIndex index(PointSet(3, pts), 0.1);
    double worst = 0.0;
    for (int q = 0; q < 100; ++q) {
        const Vec x = testing::random_vec(rng, 3, -2.5, 2.5);
        worst = std::max(worst, std::abs(index.distance(x) - testing::brute_distance(pts, x)));
    }
    report(10, worst <= 1e-12, fmt("distance vs brute force, 100 queries on 1e4 points: max error %.2e", worst));
}

} // namespace

int main()
{
    configure_threads_from_env();

    criterion1();
    criterion2();
    criterion3();

    const auto full = run_preset("heart2d-full");
    const auto full_linear = run_preset("heart2d-full-linear");
    const auto reduced = run_preset("heart2d-reduced");
    const double dx = full.dx();
    {
        const double maxd = max_data_distance(full);
        const double haus = hausdorff(full.curve, polygon_through(full.data.points()));
        const bool ok = !full.failure && maxd <= 2 * dx && haus <= 3 * dx;
        report(4, ok,
               fmt("heart2d-full: max data distance %.2f dx (<= 2), Hausdorff to polygon %.2f dx (<= 3), %zu loop(s)",
                   maxd / dx, haus / dx, full.curve.loops.size()));
    }
    {
        const double ratio = double(reduced.nodes.grid_count()) / double(reduced.nodes.lattice_size);
        const double haus = hausdorff(full_linear.curve, reduced.curve);
        const double haus_mq = hausdorff(full.curve, reduced.curve);
        report(5, ratio >= 0.08 && ratio <= 0.20 && haus <= 2 * dx && !reduced.failure,
               fmt("reduced lattice fraction %.1f%% (8-20%%), Hausdorff full vs reduced %.2f dx (<= 2); "
                   "vs multiquadric full grid %.2f dx",
                   100 * ratio, haus / dx, haus_mq / dx));
    }
    {
        bool ok = true;
        std::string detail;
        for (const auto* r : {&full, &reduced}) {
            const auto& h = r->history;
            if (h.size() < 150) {
                ok = false;
                detail += r->name + ": short history; ";
                continue;
            }
            const double ratio = h[149] / h[9];
            const double slope = log_slope(h, 10, 150);
            ok = ok && ratio < 0.1 && slope < 0;
            detail += fmt("%s E150/E10 %.3f slope %.2e; ", r->name.c_str(), ratio, slope);
        }
        report(6, ok, detail);
    }
    {
        bool ok = true;
        std::string detail;
        for (const char* name : {"heart3d", "heart3d-noise-0.01", "heart3d-noise-0.025", "heart3d-noise-0.05"}) {
            const auto r = run_preset(name);
            const auto cfg = *find_preset(name);
            const auto topo = analyze_topology(r.mesh);
            const double maxd = max_data_distance(r);
            const double bound = 2 * r.dx() + cfg.noise_eta;
            const bool pass = !r.failure && all_finite(r.final_values) && topo.closed() && maxd <= bound;
            ok = ok && pass;
            detail += fmt("%s closed=%d chi=%ld maxd %.2f dx (<= %.2f); ", name, int(topo.closed()),
                          topo.euler_characteristic(), maxd / r.dx(), bound / r.dx());
        }
        report(7, ok, detail);
    }
    {
        const auto cubes = run_preset("cubes3d");
        const auto topo = analyze_topology(cubes.mesh);
        const bool ok = !cubes.failure && all_finite(cubes.final_values) && topo.closed();
        std::string detail = fmt("cubes3d finite=%d closed=%d chi=%ld components=%zu (max data distance %.2f dx); ",
                                 int(all_finite(cubes.final_values)), int(topo.closed()), topo.euler_characteristic(),
                                 topo.components, max_data_distance(cubes) / cubes.dx());
        const auto teapot = *find_preset("teapot");
        bool teapot_ok = true;
        if (std::filesystem::exists(teapot.input_path)) {
            const auto r = run_preset("teapot");
            const auto t = analyze_topology(r.mesh);
            teapot_ok = !r.failure && all_finite(r.final_values) && t.closed();
            detail += fmt("teapot finite=%d closed=%d", int(all_finite(r.final_values)), int(t.closed()));
        } else {
            detail += "teapot skipped: " + teapot.input_path + " not present";
        }
        report(8, ok && teapot_ok, detail);
    }
    {
        double e10 = NAN;
        for (const auto& [n, e] : full.energies)
            if (n == 10) e10 = e;
        const double e150 = full.energies.back().second;
        report(9, full.energies.back().first == 150 && e150 < e10,
               fmt("heart2d-full energy: iteration 10 %.4f, iteration 150 %.4f", e10, e150));
    }
    criterion10();

    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
