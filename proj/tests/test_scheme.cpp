#include "support.hpp"

#include "slrecon/extract.hpp"
#include "slrecon/scheme.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace slrecon;

namespace {

struct RandomSetup {
    std::vector<Vec> centers;
    Interpolant itp;
};

RandomSetup random_interpolant(std::mt19937_64& rng, int dim, KernelSpec kernel)
{
    NodeSet grid = build_full_grid(Box::cube(dim, -2, 2), dim == 2 ? 12 : 6);
    auto centers = grid.interior;
    std::uniform_real_distribution<double> val(-3, 3);
    std::vector<double> u;
    for (const auto& x : centers) u.push_back(x.squaredNorm() - 1.5 + 0.3 * val(rng));
    auto itp = fit(Factorization(centers, kernel), u);
    return {centers, itp};
}

SchemeConfig off()
{
    SchemeConfig c;
    c.limiter = Limiter::Off;
    return c;
}

double mean_radius(const Polyline2D& c)
{
    double s = 0.0;
    std::size_t m = 0;
    for (const auto& l : c.loops)
        for (const auto& v : l.vertices) s += v.norm(), ++m;
    return s / m;
}

} // namespace

TEST_CASE("2D tangent is orthogonal to the gradient")
{
    std::mt19937_64 rng(41);
    for (int i = 0; i < 100; ++i) {
        const Vec g = testing::random_vec(rng, 2, -3, 3);
        const auto f = tangent2d(g);
        CHECK(f.sigma.norm() == doctest::Approx(1.0));
        CHECK(std::abs(f.sigma.dot(g)) < 1e-12 * g.norm());
    }
    CHECK(tangent2d(make_vec(1, 0)).sigma == make_vec(0, -1));
    CHECK(tangent2d(make_vec(0, 0)).degenerate);
}

TEST_CASE("3D tangent frame is orthonormal and orthogonal to the gradient")
{
    std::mt19937_64 rng(42);
    for (int i = 0; i < 100; ++i) {
        const Vec g = testing::random_vec(rng, 3, -3, 3);
        const auto f = tangent3d(g);
        CHECK(f.nu1.norm() == doctest::Approx(1.0));
        CHECK(f.nu2.norm() == doctest::Approx(1.0));
        CHECK(std::abs(f.nu1.dot(f.nu2)) < 1e-12);
        CHECK(std::abs(f.nu1.dot(g)) < 1e-12 * g.norm());
        CHECK(std::abs(f.nu2.dot(g)) < 1e-12 * g.norm());
    }
    const auto e = tangent3d(make_vec(0, 2, 0));
    CHECK(e.nu1 == make_vec(1, 0, 0));
    CHECK(e.nu2 == make_vec(0, 0, 1));
}

TEST_CASE("averaged and incremental forms of the update agree")
{
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> dist(0.0, 0.6);
    for (int dim : {2, 3}) {
        for (auto kernel : {KernelSpec::linear(), KernelSpec::multiquadric(0.3)}) {
            const auto setup = random_interpolant(rng, dim, kernel);
            for (double cs : {1.0, 1e6}) { // second value forces the isotropic branch
                SchemeConfig cfg = off();
                cfg.singular_c = cs;
                for (int q = 0; q < 200; ++q) {
                    const Vec x = testing::random_vec(rng, dim, -1.5, 1.5);
                    const double d = dist(rng);
                    Vec dd = testing::random_vec(rng, dim, -1, 1);
                    if (dd.norm() > 1.0) dd.normalize();
                    const double u = setup.itp.eval(x);
                    const auto avg = update_node(setup.itp, x, d, dd, cfg);
                    const double inc = update_node_incremental(setup.itp, x, u, d, dd, cfg);
                    CHECK(std::abs(avg.value - inc) <= 1e-12 * (1.0 + std::abs(avg.value)));
                    CHECK(avg.branch == (cs > 1.0 ? Branch::Isotropic : avg.branch));
                }
            }
        }
    }
}

TEST_CASE("a node on the data set keeps its value")
{
    std::mt19937_64 rng(44);
    for (int dim : {2, 3}) {
        const auto setup = random_interpolant(rng, dim, KernelSpec::multiquadric(0.4));
        const Vec x = setup.centers[5];
        const auto up = update_node(setup.itp, x, 0.0, Vec::Zero(dim), off());
        CHECK(up.value == doctest::Approx(setup.itp.eval(x)).epsilon(1e-12));
    }
}

TEST_CASE("affine fields are transported exactly")
{
    // I reproduces affine data, so the averaged samples equal u(y).
    for (int dim : {2, 3}) {
        auto nodes = build_full_grid(Box::cube(dim, -2, 2), dim == 2 ? 9 : 5);
        const Vec c = dim == 2 ? make_vec(0.4, -0.2) : make_vec(0.4, -0.2, 0.3);
        LevelSetState s;
        for (const auto& x : nodes.interior) s.values.push_back(0.5 + c.dot(x));
        CoefficientField coeffs;
        for (std::size_t i = 0; i < nodes.interior_size(); ++i) {
            coeffs.distance.push_back(0.3);
            coeffs.gradient.push_back(Vec::Ones(dim) / std::sqrt(double(dim)));
        }
        auto cfg = off();
        const auto itp = fit(Factorization(nodes.centers(), KernelSpec::linear()), s.values);
        const auto next = step(s, itp, nodes, coeffs, cfg);
        for (std::size_t i = 0; i < nodes.interior_size(); ++i)
            CHECK(next.values[i] == doctest::Approx(s.values[i] + cfg.dt * c.dot(coeffs.gradient[i])));
        CHECK(next.iteration == 1);
    }
}

TEST_CASE("override mode shrinks a circle at the mean-curvature rate")
{
    auto nodes = build_full_grid(Box::cube(2, -2, 2), 30);
    SchemeConfig cfg = off();
    cfg.dt = 0.002;
    cfg.override_coefficients = true;
    cfg.max_iterations = 25;
    const auto coeffs = sample_coefficients(nodes, nullptr, cfg);
    CHECK(coeffs.distance.front() == 1.0);
    CHECK(coeffs.gradient.front().norm() == 0.0);
    const Factorization fact(nodes.centers(), KernelSpec::multiquadric(nodes.dx));
    const auto result = run(nodes, fact, coeffs, cfg, initial_condition(nodes, 1.0, make_vec(0, 0)).state);
    REQUIRE_FALSE(result.failure);
    const auto curve = contour2d(fit(fact, center_values(nodes, result.state)), nodes.domain, 200);
    CHECK(curve.loops.size() == 1);
    CHECK(mean_radius(curve) == doctest::Approx(std::sqrt(1.0 - 2.0 * 0.05)).epsilon(0.01));
    CHECK(result.history().size() == 25);
}

TEST_CASE("update metric")
{
    const std::vector<double> prev = {1, -2, 3}, next = {1.5, -2, 2};
    CHECK(update_metric(next, prev) == doctest::Approx(1.5 / 6));
    const std::vector<double> zero = {0, 0, 0};
    CHECK_THROWS_AS(update_metric(next, zero), Error);
}

TEST_CASE("limiters bound the update")
{
    std::mt19937_64 rng(45);
    auto nodes = build_full_grid(Box::cube(2, -2, 2), 15);
    LevelSetState s;
    std::uniform_real_distribution<double> val(-1, 1);
    for (std::size_t i = 0; i < nodes.interior_size(); ++i) s.values.push_back(val(rng));
    const auto itp = fit(Factorization(nodes.centers(), KernelSpec::multiquadric(nodes.dx)), s.values);
    const PointSet data(2, {make_vec(0, 0), make_vec(1, 1)});
    const DistanceIndex index(data, nodes.dx);

    SchemeConfig local;
    local.limiter = Limiter::Local;
    local.dt = 0.05;
    const auto coeffs = sample_coefficients(nodes, &index, local);
    REQUIRE(coeffs.neighbors.size() == nodes.interior_size());
    const auto a = step(s, itp, nodes, coeffs, local);
    for (std::size_t j = 0; j < nodes.interior_size(); ++j) {
        double lo = s.values[j], hi = lo;
        for (int i : coeffs.neighbors[j]) lo = std::min(lo, s.values[i]), hi = std::max(hi, s.values[i]);
        CHECK(a.values[j] >= lo);
        CHECK(a.values[j] <= hi);
    }

    SchemeConfig range = local;
    range.limiter = Limiter::Range;
    range.range_lo = -0.1;
    range.range_hi = 0.2;
    const auto b = step(s, itp, nodes, sample_coefficients(nodes, &index, range), range);
    for (double v : b.values) {
        CHECK(v >= -0.1);
        CHECK(v <= 0.2);
    }
    CHECK(parse_limiter("range") == Limiter::Range);
    CHECK_THROWS_AS(parse_limiter("minmod"), Error);
}

TEST_CASE("run fills the range limiter from the initial state")
{
    auto nodes = build_full_grid(Box::cube(2, -2, 2), 12);
    const PointSet data(2, {make_vec(0, 0.5), make_vec(0.5, 0), make_vec(0, -0.5), make_vec(-0.5, 0)});
    add_data_nodes(nodes, data);
    const DistanceIndex index(data, nodes.dx);
    SchemeConfig cfg;
    cfg.limiter = Limiter::Range;
    cfg.max_iterations = 20;
    const auto u0 = initial_condition(nodes, 1.0, make_vec(0, 0)).state;
    const auto [lo, hi] = std::minmax_element(u0.values.begin(), u0.values.end());
    const auto result = run(nodes, &index, KernelSpec::multiquadric(nodes.dx), cfg, u0);
    REQUIRE_FALSE(result.failure);
    CHECK(result.state.iteration == 20);
    for (double v : result.state.values) {
        CHECK(v >= *lo);
        CHECK(v <= *hi);
    }
}

TEST_CASE("stop tolerance ends the run early")
{
    auto nodes = build_full_grid(Box::cube(2, -2, 2), 10);
    SchemeConfig cfg;
    cfg.override_coefficients = true;
    cfg.max_iterations = 50;
    cfg.stop_tolerance = 1.0;
    const auto result = run(nodes, nullptr, KernelSpec::linear(), cfg, initial_condition(nodes, 1.0, make_vec(0, 0)).state);
    CHECK(result.state.iteration == 1);
}

TEST_CASE("configuration is validated")
{
    SchemeConfig c;
    c.dt = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = SchemeConfig{};
    c.singular_alpha = -1.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = SchemeConfig{};
    c.range_lo = 1.0;
    c.range_hi = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
    CHECK(SchemeConfig{}.singular_threshold() == doctest::Approx(0.1));
}

TEST_CASE("step rejects mismatched inputs")
{
    auto nodes = build_full_grid(Box::cube(2, -2, 2), 5);
    LevelSetState s;
    s.values.assign(3, 0.0);
    CoefficientField coeffs;
    const auto itp = fit(Factorization(nodes.centers(), KernelSpec::linear()), std::vector<double>(25, 1.0));
    CHECK_THROWS_AS(step(s, itp, nodes, coeffs, SchemeConfig{}), Error);
}
