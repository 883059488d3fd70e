#pragma once

#include "slrecon/extract.hpp"
#include "slrecon/gridding.hpp"
#include "slrecon/pointcloud.hpp"
#include "slrecon/rbf.hpp"
#include "slrecon/scheme.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace slrecon {

enum class GridMode { Full, Reduced };

// Declarative description of one reconstruction run. Optional fields fall
// back to values derived from the rest of the configuration.
struct ExperimentConfig {
    std::string name = "custom";
    int dimension = 2;

    // Data: either a synthetic shape or a point file (optionally strided).
    std::optional<Shape> shape;
    std::string input_path;
    std::size_t count = 24;
    std::size_t input_stride = 1;
    double noise_eta = 0.0;
    std::uint64_t seed = 1;

    Box domain = Box::cube(2, -2.0, 2.0);
    int lattice_count = 30;
    GridMode grid_mode = GridMode::Full;
    double delta_s = 0.2;

    KernelKind kernel = KernelKind::Multiquadric;
    double rho_factor = 1.0; // rho = rho_factor * dx

    bool anchors = false;
    std::optional<double> anchor_spacing; // default 4 dx
    std::optional<double> anchor_margin;  // default 2 delta_s
    std::optional<double> anchor_value;   // default R^2
    std::optional<double> initial_r;      // default 0.9 * distance to nearest corner
    // R = factor * largest distance from the data centroid to a data point;
    // ignored when initial_r is set.
    std::optional<double> initial_r_factor;
    // Lattice nodes closer than this many dx to the data are dropped.
    double near_data_cutoff = 0.0;

    double dt = 0.01;
    int iterations = 150;
    double singular_c = 1.0;
    double singular_alpha = 0.5;
    double stop_tolerance = 0.0;
    Limiter limiter = Limiter::Local;

    std::string output_dir;
    int extract_resolution = 256;
    // Energy diagnostic every this many iterations (0: final state only).
    int energy_every = 10;

    void validate() const;
};

// Flat "key = value" text, one key per line, '#' comments.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string format_config(const ExperimentConfig& cfg);

std::vector<ExperimentConfig> presets();
std::optional<ExperimentConfig> find_preset(const std::string& name);

struct ExperimentReport {
    std::string name;
    PointSet data;
    NodeSet nodes;
    KernelSpec kernel;
    double initial_radius = 0.0;
    std::vector<std::string> warnings;

    std::vector<double> history;
    // (iteration, energy) pairs of the diagnostic series.
    std::vector<std::pair<int, double>> energies;
    std::vector<double> final_values;

    Polyline2D curve; // 2D runs
    TriMesh mesh;     // 3D runs

    double seconds_setup = 0.0;
    double seconds_factor = 0.0;
    double seconds_run = 0.0;
    double seconds_extract = 0.0;

    std::optional<std::string> failure;

    double dx() const { return nodes.dx; }
    double final_e1() const { return history.empty() ? 0.0 : history.back(); }
};

class StageError : public Error {
public:
    StageError(const std::string& stage, const std::string& what)
        : Error(stage + ": " + what), stage_(stage) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

// Progress callback: (iteration, E^n_1).
using ProgressFn = std::function<void(int, double)>;

// generate/load -> perturb -> distance index -> grid -> anchors -> initial
// condition -> run -> extract -> export. Files are written only when
// cfg.output_dir is set. Throws StageError naming the failing stage; a scheme
// failure mid-run is reported in ExperimentReport::failure after the partial
// outputs are written.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

// Output files: geometry.{csv,svg|obj}, convergence.csv, energy.csv, nodes.txt,
// field.txt, summary.txt.
void write_outputs(const ExperimentConfig& cfg, const ExperimentReport& report);

// Nodal field for re-extraction: header comments giving dimension, kernel,
// rho and domain, then "kind x y [z] value" lines.
struct FieldFile {
    int dim = 0;
    KernelSpec kernel;
    Box domain;
    std::vector<Vec> centers;
    std::vector<double> values;
};

void write_field(const NodeSet& nodes, const KernelSpec& kernel, std::span<const double> interior_values,
                 const std::filesystem::path& path);
FieldFile read_field(const std::filesystem::path& path);

} // namespace slrecon
