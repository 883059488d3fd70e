#include "support.hpp"

#include "slrecon/rbf.hpp"

#include <doctest.h>

#include <cmath>

using namespace slrecon;

namespace {

// Well-separated random centers: rejection sampling with a minimum spacing.
std::vector<Vec> spaced_points(std::mt19937_64& rng, int dim, std::size_t n, double min_gap)
{
    std::vector<Vec> out;
    while (out.size() < n) {
        const Vec p = testing::random_vec(rng, dim, -2, 2);
        bool ok = true;
        for (const auto& q : out) ok = ok && (p - q).norm() >= min_gap;
        if (ok) out.push_back(p);
    }
    return out;
}

} // namespace

TEST_CASE("kernel values")
{
    CHECK(KernelSpec::linear().phi(3.0) == 3.0);
    CHECK(KernelSpec::multiquadric(4.0).phi(3.0) == doctest::Approx(5.0));
    CHECK_THROWS_AS(KernelSpec::multiquadric(0.0), Error);
    CHECK(parse_kernel("linear") == KernelKind::Linear);
    CHECK(parse_kernel("multiquadric") == KernelKind::Multiquadric);
    CHECK_THROWS_AS(parse_kernel("gaussian"), Error);
}

TEST_CASE("interpolation conditions and moment conditions hold")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> val(-5, 5);
    for (int dim : {2, 3}) {
        for (auto kernel : {KernelSpec::linear(), KernelSpec::multiquadric(0.3)}) {
            const auto centers = spaced_points(rng, dim, 120, 0.05);
            const Factorization fact(centers, kernel);
            std::vector<double> u(centers.size());
            for (auto& v : u) v = val(rng);
            const auto itp = fit(fact, u);
            double scale = 0.0;
            for (double v : u) scale = std::max(scale, std::abs(v));
            for (std::size_t i = 0; i < centers.size(); ++i)
                CHECK(std::abs(itp.eval(centers[i]) - u[i]) <= 1e-8 * scale);
            const auto& lam = itp.lambda();
            double lsum = lam.cwiseAbs().sum();
            CHECK(std::abs(lam.sum()) <= 1e-8 * lsum);
            for (int k = 0; k < dim; ++k) {
                double m = 0.0;
                for (std::size_t i = 0; i < centers.size(); ++i) m += lam[i] * centers[i][k];
                CHECK(std::abs(m) <= 1e-8 * lsum);
            }
        }
    }
}

TEST_CASE("affine data are reproduced exactly")
{
    std::mt19937_64 rng(22);
    for (int dim : {2, 3}) {
        for (auto kernel : {KernelSpec::linear(), KernelSpec::multiquadric(0.5)}) {
            const auto centers = spaced_points(rng, dim, 60, 0.1);
            const Vec c = testing::random_vec(rng, dim, -1, 1);
            const double c0 = 0.7;
            std::vector<double> u;
            for (const auto& x : centers) u.push_back(c0 + c.dot(x));
            const auto itp = fit(Factorization(centers, kernel), u);
            CHECK(itp.lambda().cwiseAbs().maxCoeff() < 1e-9);
            for (int q = 0; q < 50; ++q) {
                const Vec x = testing::random_vec(rng, dim, -2, 2);
                CHECK(std::abs(itp.eval(x) - (c0 + c.dot(x))) <= 1e-9);
                CHECK((itp.eval_gradient(x) - c).norm() <= 1e-8);
            }
        }
    }
}

TEST_CASE("gradient matches centered differences")
{
    std::mt19937_64 rng(23);
    const auto centers = spaced_points(rng, 3, 40, 0.1);
    std::vector<double> u;
    for (const auto& x : centers) u.push_back(x.squaredNorm() - 1.0);
    for (auto kernel : {KernelSpec::linear(), KernelSpec::multiquadric(0.2)}) {
        const auto itp = fit(Factorization(centers, kernel), u);
        for (int q = 0; q < 30; ++q) {
            const Vec x = testing::random_vec(rng, 3, -1.5, 1.5);
            Vec fd(3);
            for (int k = 0; k < 3; ++k) {
                Vec e = Vec::Zero(3);
                e[k] = 1e-6;
                fd[k] = (itp.eval(x + e) - itp.eval(x - e)) / 2e-6;
            }
            CHECK((itp.eval_gradient(x) - fd).norm() < 1e-5 * (1.0 + fd.norm()));
        }
    }
}

TEST_CASE("eval_many agrees with eval")
{
    std::mt19937_64 rng(24);
    const auto centers = spaced_points(rng, 2, 30, 0.1);
    std::vector<double> u(centers.size(), 1.0);
    u[3] = -2.0;
    const auto itp = fit(Factorization(centers, KernelSpec::multiquadric(0.3)), u);
    const auto xs = testing::random_points(rng, 2, 100, -2, 2);
    const auto many = itp.eval_many(xs);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(many[i] == doctest::Approx(itp.eval(xs[i])).epsilon(1e-14));
}

TEST_CASE("coincident centers are reported as a singular system")
{
    std::vector<Vec> centers = {make_vec(0, 0), make_vec(1, 0), make_vec(0, 1), make_vec(1, 1), make_vec(1, 0)};
    CHECK_THROWS_AS(Factorization(centers, KernelSpec::multiquadric(0.5)), SingularSystemError);
    // Collinear centers leave the affine part undetermined.
    std::vector<Vec> line = {make_vec(0, 0), make_vec(1, 0), make_vec(2, 0), make_vec(3, 0)};
    CHECK_THROWS_AS(Factorization(line, KernelSpec::linear()), SingularSystemError);
}

TEST_CASE("right-hand side length is checked")
{
    std::vector<Vec> centers = {make_vec(0, 0), make_vec(1, 0), make_vec(0, 1), make_vec(1, 1)};
    const Factorization fact(centers, KernelSpec::linear());
    std::vector<double> u = {1, 2, 3};
    CHECK_THROWS_AS(fit(fact, u), Error);
}
