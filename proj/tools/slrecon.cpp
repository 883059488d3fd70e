// slrecon: point-cloud reconstruction front end.
#include "slrecon/parallel.hpp"
#include "slrecon/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

using namespace slrecon;

namespace {

// Runtime failures (as opposed to usage errors) map to exit code 2.
struct RuntimeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int report_run(const ExperimentConfig& cfg)
{
    ExperimentReport report;
    try {
        report = run_experiment(cfg, [](int n, double e1) {
            if (n % 10 == 0) std::fprintf(stderr, "iteration %d  E1 %.6e\n", n, e1);
        });
    } catch (const std::exception& e) {
        throw RuntimeFailure(e.what());
    }
    for (const auto& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    std::printf("%s: %zu nodes, %zu iterations, final E1 %.6e\n", report.name.c_str(), report.nodes.size(),
                report.history.size(), report.final_e1());
    if (!report.energies.empty()) std::printf("energy %.6e\n", report.energies.back().second);
    if (!cfg.output_dir.empty()) std::printf("outputs written to %s\n", cfg.output_dir.c_str());
    if (report.failure) {
        std::fprintf(stderr, "error: %s\n", report.failure->c_str());
        return 2;
    }
    return 0;
}

void write_geometry(const std::string& out, const FieldFile& field, int resolution)
{
    const auto fact = Factorization(field.centers, field.kernel);
    const auto itp = fit(fact, field.values);
    const auto ext = std::filesystem::path(out).extension().string();
    if (field.dim == 2) {
        const auto curve = contour2d(itp, field.domain, resolution);
        if (ext == ".svg") write_polyline_svg(curve, field.domain, out);
        else if (ext == ".csv") write_polyline_csv(curve, out);
        else throw CLI::ValidationError("--out", "2D fields are written as .csv or .svg");
        std::printf("%zu loops, %zu vertices\n", curve.loops.size(), curve.vertex_count());
    } else {
        if (ext != ".obj") throw CLI::ValidationError("--out", "3D fields are written as .obj");
        const auto mesh = isosurface3d(itp, field.domain, resolution);
        write_obj(mesh, out);
        std::printf("%zu vertices, %zu triangles\n", mesh.vertices.size(), mesh.triangles.size());
    }
}

} // namespace

int main(int argc, char** argv)
{
    configure_threads_from_env();

    CLI::App app{"Surface reconstruction from unorganized points by level-set evolution"};
    app.require_subcommand(1);

    std::string config_path;
    auto* reconstruct = app.add_subcommand("reconstruct", "Run an experiment described by a config file");
    reconstruct->add_option("--config", config_path, "Config file (key = value lines)")->required();

    std::string preset_name, preset_out;
    auto* preset = app.add_subcommand("preset", "Run a named preset experiment");
    preset->add_option("--name", preset_name, "Preset name (see list-presets)")->required();
    preset->add_option("--out", preset_out, "Output directory (default out/<name>)");

    std::string shape_name_arg, shape_out;
    std::size_t shape_count = 0;
    std::uint64_t shape_seed = 1;
    auto* shapes = app.add_subcommand("shapes", "Write a synthetic point set");
    shapes->add_option("--name", shape_name_arg, "heart2d, heart3d or cubes3d")->required();
    shapes->add_option("--count", shape_count, "Number of points")->required()->check(CLI::PositiveNumber);
    shapes->add_option("--out", shape_out, "Output point file")->required();
    shapes->add_option("--seed", shape_seed, "Sampling seed (3D shapes)");

    std::string field_path, contour_out;
    int resolution = 0;
    auto* contour = app.add_subcommand("contour", "Extract the zero level of a saved field");
    contour->add_option("--field", field_path, "field.txt written by reconstruct/preset")->required();
    contour->add_option("--out", contour_out, "Output geometry (.csv/.svg in 2D, .obj in 3D)")->required();
    contour->add_option("--resolution", resolution, "Samples per axis (default 256 in 2D, 96 in 3D)")
        ->check(CLI::Range(8, 4096));

    auto* list = app.add_subcommand("list-presets", "Print the preset names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*reconstruct) {
            ExperimentConfig cfg;
            try {
                cfg = load_config(config_path);
            } catch (const std::exception& e) {
                std::fprintf(stderr, "error: %s\n", e.what());
                return 1;
            }
            return report_run(cfg);
        }
        if (*preset) {
            auto cfg = find_preset(preset_name);
            if (!cfg) {
                std::fprintf(stderr, "error: unknown preset '%s' (see list-presets)\n", preset_name.c_str());
                return 1;
            }
            cfg->output_dir = preset_out.empty() ? "out/" + cfg->name : preset_out;
            return report_run(*cfg);
        }
        if (*shapes) {
            ShapeRequest req;
            try {
                req.shape = parse_shape(shape_name_arg);
            } catch (const std::exception& e) {
                std::fprintf(stderr, "error: %s\n", e.what());
                return 1;
            }
            req.count = shape_count;
            req.seed = shape_seed;
            save_points(generate_shape(req), shape_out);
            return 0;
        }
        if (*contour) {
            const auto field = read_field(field_path);
            write_geometry(contour_out, field, resolution > 0 ? resolution : (field.dim == 2 ? 256 : 96));
            return 0;
        }
        if (*list) {
            for (const auto& p : presets()) std::printf("%s\n", p.name.c_str());
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
