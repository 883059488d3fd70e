#include "support.hpp"

#include "slrecon/pipeline.hpp"

#include <doctest.h>

#include <fstream>
#include <set>

using namespace slrecon;

namespace {

ExperimentConfig small_heart()
{
    auto cfg = *find_preset("heart2d-full");
    cfg.lattice_count = 14;
    cfg.iterations = 12;
    cfg.extract_resolution = 64;
    cfg.energy_every = 5;
    return cfg;
}

} // namespace

TEST_CASE("config text round-trips through format and parse")
{
    for (const auto& p : presets()) {
        CAPTURE(p.name);
        const auto text = format_config(p);
        CHECK(format_config(parse_config(text)) == text);
    }
    ExperimentConfig c;
    c.shape = Shape::Heart2D;
    c.initial_r = 1.2345678901234567;
    c.noise_eta = 1e-3;
    c.domain = Box{make_vec(-1, -2), make_vec(3, 4)};
    const auto back = parse_config(format_config(c));
    CHECK(*back.initial_r == *c.initial_r);
    CHECK(back.domain.lo == c.domain.lo);
    CHECK(back.domain.hi == c.domain.hi);
}

TEST_CASE("config parsing")
{
    const auto cfg = parse_config(R"(
        # comment
        dimension = 3
        shape = heart3d    # trailing comment
        domain = -1 1
        grid_mode = reduced
        kernel = linear
        limiter = off
        anchors = yes
    )");
    CHECK(cfg.dimension == 3);
    CHECK(cfg.domain.lo == Vec::Constant(3, -1.0));
    CHECK(cfg.grid_mode == GridMode::Reduced);
    CHECK(cfg.kernel == KernelKind::Linear);
    CHECK(cfg.limiter == Limiter::Off);
    CHECK(cfg.anchors);

    CHECK_THROWS_AS(parse_config("shape = heart2d\nbogus = 1\n"), Error);
    CHECK_THROWS_AS(parse_config("shape = heart2d\ndt = fast\n"), Error);
    CHECK_THROWS_AS(parse_config("shape = heart2d\ndt = -1\n"), Error);
    CHECK_THROWS_AS(parse_config("shape = heart2d\nno equals sign\n"), Error);
    CHECK_THROWS_AS(parse_config("shape = heart3d\n"), Error); // dimension mismatch
    CHECK_THROWS_AS(parse_config("dimension = 2\n"), Error);   // no data source
    CHECK_THROWS_AS(load_config("/nonexistent/config.txt"), Error);
}

TEST_CASE("preset catalogue")
{
    std::set<std::string> names;
    for (const auto& p : presets()) {
        names.insert(p.name);
        CHECK_NOTHROW(p.validate());
    }
    for (const char* n : {"heart2d-full", "heart2d-full-fine", "heart2d-reduced", "heart3d", "heart3d-noise-0.01",
                          "heart3d-noise-0.025", "heart3d-noise-0.05", "cubes3d", "teapot"})
        CHECK(names.count(n) == 1);
    const auto h = *find_preset("heart2d-full");
    CHECK(h.lattice_count == 30);
    CHECK(h.dt == 0.01);
    CHECK(h.iterations == 150);
    CHECK(h.kernel == KernelKind::Multiquadric);
    CHECK(h.rho_factor == 1.0);
    CHECK(find_preset("heart2d-reduced")->delta_s == 0.2);
    CHECK(find_preset("heart2d-full-fine")->lattice_count == 60);
    const auto h3 = *find_preset("heart3d");
    CHECK(h3.count == 748);
    CHECK(h3.delta_s == 0.1);
    CHECK(h3.lattice_count == 40);
    CHECK(h3.dt == 0.005);
    CHECK(h3.iterations == 80);
    const auto cubes = *find_preset("cubes3d");
    CHECK(cubes.count == 4020);
    CHECK(cubes.delta_s == 0.01);
    CHECK(cubes.lattice_count == 80);
    CHECK(cubes.iterations == 100);
    const auto teapot = *find_preset("teapot");
    CHECK(teapot.dt == 0.001);
    CHECK(teapot.iterations == 150);
    CHECK(teapot.lattice_count == 50);
    CHECK_FALSE(find_preset("nope"));
}

TEST_CASE("a small run writes every output file")
{
    auto cfg = small_heart();
    const auto dir = testing::scratch_dir("run");
    cfg.output_dir = dir.string();
    int calls = 0;
    const auto report = run_experiment(cfg, [&](int, double) { ++calls; });
    CHECK(calls == 12);
    CHECK_FALSE(report.failure);
    CHECK(report.history.size() == 12);
    CHECK(report.energies.size() == 3); // iterations 5, 10 and the final one
    CHECK(report.energies.back().first == 12);
    CHECK_FALSE(report.curve.empty());
    for (const char* f : {"geometry.csv", "geometry.svg", "convergence.csv", "energy.csv", "nodes.txt", "field.txt",
                          "summary.txt"})
        CHECK(std::filesystem::exists(dir / f));

    std::ifstream conv(dir / "convergence.csv");
    std::string line;
    std::getline(conv, line);
    CHECK(line == "iteration,E1");
    int rows = 0;
    while (std::getline(conv, line)) ++rows;
    CHECK(rows == 12);

    // The saved field reproduces the final interpolant.
    const auto field = read_field(dir / "field.txt");
    CHECK(field.dim == 2);
    CHECK(field.centers.size() == report.nodes.size());
    const auto itp = fit(Factorization(field.centers, field.kernel), field.values);
    const auto again = contour2d(itp, field.domain, cfg.extract_resolution);
    CHECK(hausdorff(again, report.curve) < 1e-9);
}

TEST_CASE("failures name the stage")
{
    ExperimentConfig cfg;
    cfg.input_path = "/nonexistent/points.txt";
    try {
        run_experiment(cfg);
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage() == "data");
    }
    cfg = small_heart();
    cfg.domain = Box::cube(2, -1, 1); // data outside the domain
    try {
        run_experiment(cfg);
        FAIL("expected a stage error");
    } catch (const StageError& e) {
        CHECK(e.stage() == "grid");
    }
}

TEST_CASE("a radius that misses the data is reported as a warning")
{
    auto cfg = small_heart();
    cfg.initial_r = 0.5;
    cfg.iterations = 1;
    const auto report = run_experiment(cfg);
    CHECK_FALSE(report.warnings.empty());
}
