#include "slrecon/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace slrecon {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || !std::isfinite(x))
        throw Error("config key '" + key + "': '" + v + "' is not a finite number");
    return x;
}

long to_long(const std::string& key, const std::string& v)
{
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') throw Error("config key '" + key + "': '" + v + "' is not an integer");
    return x;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    throw Error("config key '" + key + "': '" + v + "' is not a boolean");
}

Box to_box(const std::string& key, const std::string& v, int dim)
{
    std::istringstream ss(v);
    std::vector<double> xs;
    for (std::string t; ss >> t;) xs.push_back(to_double(key, t));
    if (xs.size() == 2) return Box::cube(dim, xs[0], xs[1]);
    if (xs.size() == static_cast<std::size_t>(2 * dim)) {
        Box b{Vec(dim), Vec(dim)};
        for (int k = 0; k < dim; ++k) {
            b.lo[k] = xs[2 * k];
            b.hi[k] = xs[2 * k + 1];
        }
        return b;
    }
    throw Error("config key '" + key + "': expected 'lo hi' or one 'lo hi' pair per axis");
}

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

void ExperimentConfig::validate() const
{
    if (dimension != 2 && dimension != 3) throw Error("dimension must be 2 or 3");
    if (!shape && input_path.empty()) throw Error("either shape or input_path must be set");
    if (shape && shape_dim(*shape) != dimension) throw Error("shape dimension does not match 'dimension'");
    if (domain.dim() != dimension) throw Error("domain dimension does not match 'dimension'");
    if (input_stride == 0) throw Error("input_stride must be positive");
    if (!(noise_eta >= 0.0)) throw Error("noise_eta must be nonnegative");
    if (lattice_count < 4) throw Error("lattice_count must be at least 4");
    if (!(delta_s > 0.0)) throw Error("delta_s must be positive");
    if (!(rho_factor > 0.0)) throw Error("rho_factor must be positive");
    if (anchor_spacing && !(*anchor_spacing > 0.0)) throw Error("anchor_spacing must be positive");
    if (anchor_margin && !(*anchor_margin >= 0.0)) throw Error("anchor_margin must be nonnegative");
    if (initial_r && !(*initial_r > 0.0)) throw Error("initial_r must be positive");
    if (initial_r_factor && !(*initial_r_factor > 0.0)) throw Error("initial_r_factor must be positive");
    if (!(near_data_cutoff >= 0.0)) throw Error("near_data_cutoff must be nonnegative");
    if (!(dt > 0.0)) throw Error("dt must be positive");
    if (iterations < 0) throw Error("iterations must be nonnegative");
    if (!(singular_c > 0.0) || !(singular_alpha > 0.0)) throw Error("singular_c and singular_alpha must be positive");
    if (extract_resolution < 8) throw Error("extract_resolution must be at least 8");
    if (energy_every < 0) throw Error("energy_every must be nonnegative");
}

ExperimentConfig parse_config(const std::string& text)
{
    ExperimentConfig cfg;
    std::vector<std::pair<std::string, std::string>> entries;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config line " + std::to_string(lineno) + ": expected 'key = value'");
        entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }

    // The domain depends on the dimension, so apply it last.
    std::optional<std::string> domain_text;
    bool domain_seen = false;
    const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters = {
        {"name", [&](auto&, auto& v) { cfg.name = v; }},
        {"dimension", [&](auto& k, auto& v) { cfg.dimension = static_cast<int>(to_long(k, v)); }},
        {"shape", [&](auto&, auto& v) { cfg.shape = parse_shape(v); }},
        {"input_path", [&](auto&, auto& v) { cfg.input_path = v; }},
        {"count", [&](auto& k, auto& v) { cfg.count = static_cast<std::size_t>(to_long(k, v)); }},
        {"input_stride", [&](auto& k, auto& v) { cfg.input_stride = static_cast<std::size_t>(to_long(k, v)); }},
        {"noise_eta", [&](auto& k, auto& v) { cfg.noise_eta = to_double(k, v); }},
        {"seed", [&](auto& k, auto& v) { cfg.seed = static_cast<std::uint64_t>(to_long(k, v)); }},
        {"domain", [&](auto&, auto& v) { domain_text = v; domain_seen = true; }},
        {"lattice_count", [&](auto& k, auto& v) { cfg.lattice_count = static_cast<int>(to_long(k, v)); }},
        {"grid_mode", [&](auto& k, auto& v) {
             if (v == "full") cfg.grid_mode = GridMode::Full;
             else if (v == "reduced") cfg.grid_mode = GridMode::Reduced;
             else throw Error("config key '" + k + "': expected full or reduced");
         }},
        {"delta_s", [&](auto& k, auto& v) { cfg.delta_s = to_double(k, v); }},
        {"kernel", [&](auto&, auto& v) { cfg.kernel = parse_kernel(v); }},
        {"rho_factor", [&](auto& k, auto& v) { cfg.rho_factor = to_double(k, v); }},
        {"anchors", [&](auto& k, auto& v) { cfg.anchors = to_bool(k, v); }},
        {"anchor_spacing", [&](auto& k, auto& v) { cfg.anchor_spacing = to_double(k, v); }},
        {"anchor_margin", [&](auto& k, auto& v) { cfg.anchor_margin = to_double(k, v); }},
        {"anchor_value", [&](auto& k, auto& v) { cfg.anchor_value = to_double(k, v); }},
        {"initial_r", [&](auto& k, auto& v) { cfg.initial_r = to_double(k, v); }},
        {"initial_r_factor", [&](auto& k, auto& v) { cfg.initial_r_factor = to_double(k, v); }},
        {"near_data_cutoff", [&](auto& k, auto& v) { cfg.near_data_cutoff = to_double(k, v); }},
        {"dt", [&](auto& k, auto& v) { cfg.dt = to_double(k, v); }},
        {"iterations", [&](auto& k, auto& v) { cfg.iterations = static_cast<int>(to_long(k, v)); }},
        {"singular_c", [&](auto& k, auto& v) { cfg.singular_c = to_double(k, v); }},
        {"singular_alpha", [&](auto& k, auto& v) { cfg.singular_alpha = to_double(k, v); }},
        {"stop_tolerance", [&](auto& k, auto& v) { cfg.stop_tolerance = to_double(k, v); }},
        {"limiter", [&](auto&, auto& v) { cfg.limiter = parse_limiter(v); }},
        {"output_dir", [&](auto&, auto& v) { cfg.output_dir = v; }},
        {"extract_resolution", [&](auto& k, auto& v) { cfg.extract_resolution = static_cast<int>(to_long(k, v)); }},
        {"energy_every", [&](auto& k, auto& v) { cfg.energy_every = static_cast<int>(to_long(k, v)); }},
    };
    for (const auto& [key, value] : entries) {
        auto it = setters.find(key);
        if (it == setters.end()) throw Error("unknown config key '" + key + "'");
        it->second(key, value);
    }
    if (domain_seen) cfg.domain = to_box("domain", *domain_text, cfg.dimension);
    else cfg.domain = Box::cube(cfg.dimension, -2.0, 2.0);
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot read config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_config(const ExperimentConfig& cfg)
{
    std::ostringstream o;
    o << "name = " << cfg.name << "\n";
    o << "dimension = " << cfg.dimension << "\n";
    if (cfg.shape) o << "shape = " << shape_name(*cfg.shape) << "\n";
    if (!cfg.input_path.empty()) o << "input_path = " << cfg.input_path << "\n";
    o << "count = " << cfg.count << "\n";
    o << "input_stride = " << cfg.input_stride << "\n";
    o << "noise_eta = " << fmt(cfg.noise_eta) << "\n";
    o << "seed = " << cfg.seed << "\n";
    o << "domain =";
    for (int k = 0; k < cfg.domain.dim(); ++k) o << " " << fmt(cfg.domain.lo[k]) << " " << fmt(cfg.domain.hi[k]);
    o << "\n";
    o << "lattice_count = " << cfg.lattice_count << "\n";
    o << "grid_mode = " << (cfg.grid_mode == GridMode::Full ? "full" : "reduced") << "\n";
    o << "delta_s = " << fmt(cfg.delta_s) << "\n";
    o << "kernel = " << kernel_name(cfg.kernel) << "\n";
    o << "rho_factor = " << fmt(cfg.rho_factor) << "\n";
    o << "anchors = " << (cfg.anchors ? "on" : "off") << "\n";
    if (cfg.anchor_spacing) o << "anchor_spacing = " << fmt(*cfg.anchor_spacing) << "\n";
    if (cfg.anchor_margin) o << "anchor_margin = " << fmt(*cfg.anchor_margin) << "\n";
    if (cfg.anchor_value) o << "anchor_value = " << fmt(*cfg.anchor_value) << "\n";
    if (cfg.initial_r) o << "initial_r = " << fmt(*cfg.initial_r) << "\n";
    if (cfg.initial_r_factor) o << "initial_r_factor = " << fmt(*cfg.initial_r_factor) << "\n";
    o << "near_data_cutoff = " << fmt(cfg.near_data_cutoff) << "\n";
    o << "dt = " << fmt(cfg.dt) << "\n";
    o << "iterations = " << cfg.iterations << "\n";
    o << "singular_c = " << fmt(cfg.singular_c) << "\n";
    o << "singular_alpha = " << fmt(cfg.singular_alpha) << "\n";
    o << "stop_tolerance = " << fmt(cfg.stop_tolerance) << "\n";
    o << "limiter = " << limiter_name(cfg.limiter) << "\n";
    if (!cfg.output_dir.empty()) o << "output_dir = " << cfg.output_dir << "\n";
    o << "extract_resolution = " << cfg.extract_resolution << "\n";
    o << "energy_every = " << cfg.energy_every << "\n";
    return o.str();
}

// ---------------------------------------------------------------------------
// Presets

std::vector<ExperimentConfig> presets()
{
    std::vector<ExperimentConfig> out;

    ExperimentConfig heart2d;
    heart2d.name = "heart2d-full";
    heart2d.dimension = 2;
    heart2d.shape = Shape::Heart2D;
    heart2d.count = 24;
    heart2d.domain = Box::cube(2, -2.0, 2.0);
    heart2d.lattice_count = 30;
    heart2d.grid_mode = GridMode::Full;
    heart2d.kernel = KernelKind::Multiquadric;
    heart2d.rho_factor = 1.0;
    heart2d.anchors = true;
    heart2d.initial_r_factor = 1.1;
    heart2d.near_data_cutoff = 0.7;
    heart2d.limiter = Limiter::Local;
    heart2d.dt = 0.01;
    heart2d.iterations = 150;
    heart2d.extract_resolution = 256;
    heart2d.energy_every = 10;
    out.push_back(heart2d);

    auto linear = heart2d;
    linear.name = "heart2d-full-linear";
    linear.kernel = KernelKind::Linear;
    linear.initial_r_factor = 1.02;
    linear.near_data_cutoff = 0.0;
    linear.limiter = Limiter::Range;
    out.push_back(linear);

    auto fine = linear;
    fine.name = "heart2d-full-fine";
    fine.lattice_count = 60;
    out.push_back(fine);

    auto reduced = linear;
    reduced.name = "heart2d-reduced";
    reduced.grid_mode = GridMode::Reduced;
    reduced.delta_s = 0.2;
    out.push_back(reduced);

    auto reduced_mq = heart2d;
    reduced_mq.name = "heart2d-reduced-mq";
    reduced_mq.grid_mode = GridMode::Reduced;
    reduced_mq.delta_s = 0.2;
    reduced_mq.near_data_cutoff = 0.0;
    out.push_back(reduced_mq);

    ExperimentConfig heart3d;
    heart3d.name = "heart3d";
    heart3d.dimension = 3;
    heart3d.shape = Shape::Heart3D;
    heart3d.count = 748;
    heart3d.domain = Box::cube(3, -2.0, 2.0);
    heart3d.lattice_count = 40;
    heart3d.grid_mode = GridMode::Reduced;
    heart3d.delta_s = 0.1;
    heart3d.kernel = KernelKind::Linear;
    heart3d.anchors = true;
    heart3d.initial_r_factor = 1.05;
    heart3d.limiter = Limiter::Off;
    heart3d.dt = 0.005;
    heart3d.iterations = 80;
    heart3d.extract_resolution = 96;
    heart3d.energy_every = 0;
    out.push_back(heart3d);

    for (const char* eta : {"0.01", "0.025", "0.05"}) {
        auto noisy = heart3d;
        noisy.name = std::string("heart3d-noise-") + eta;
        noisy.noise_eta = std::stod(eta);
        out.push_back(noisy);
    }

    auto cubes = heart3d;
    cubes.name = "cubes3d";
    cubes.shape = Shape::Cubes3D;
    cubes.count = 4020;
    cubes.lattice_count = 80;
    cubes.delta_s = 0.01;
    cubes.dt = 0.01;
    cubes.iterations = 100;
    out.push_back(cubes);

    auto teapot = heart3d;
    teapot.name = "teapot";
    teapot.shape.reset();
    teapot.input_path = "data/teapot.xyz";
    teapot.input_stride = 4;
    teapot.domain = Box::cube(3, -0.8, 0.8);
    teapot.lattice_count = 50;
    teapot.delta_s = 0.1;
    teapot.dt = 0.001;
    teapot.iterations = 150;
    out.push_back(teapot);

    return out;
}

std::optional<ExperimentConfig> find_preset(const std::string& name)
{
    for (auto& p : presets())
        if (p.name == name) return p;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Driver

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class F>
auto stage(const char* name, F&& f)
{
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

PointSet acquire_data(const ExperimentConfig& cfg)
{
    if (cfg.shape) {
        ShapeRequest req;
        req.shape = *cfg.shape;
        req.count = cfg.count;
        req.seed = cfg.seed;
        return generate_shape(req);
    }
    auto ps = load_points(cfg.input_path, cfg.dimension);
    return cfg.input_stride > 1 ? subsample_stride(ps, cfg.input_stride) : ps;
}

void extract_into(ExperimentReport& report, const Interpolant& itp, const ExperimentConfig& cfg)
{
    if (cfg.dimension == 2) report.curve = contour2d(itp, cfg.domain, cfg.extract_resolution);
    else report.mesh = isosurface3d(itp, cfg.domain, cfg.extract_resolution);
}

double current_energy(const ExperimentReport& report, const DistanceIndex& index, int dim)
{
    return dim == 2 ? energy(report.curve, index) : energy(report.mesh, index);
}

} // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress)
{
    stage("config", [&] { cfg.validate(); return 0; });
    ExperimentReport report;
    report.name = cfg.name;
    const auto t_setup = Clock::now();

    report.data = stage("data", [&] {
        auto ps = acquire_data(cfg);
        if (ps.size() < static_cast<std::size_t>(cfg.dimension + 1))
            throw Error("data set has fewer than dimension + 1 points");
        // Noise draws use their own stream derived from the run seed.
        return perturb(ps, cfg.noise_eta, cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    });

    const double dx = (cfg.domain.hi - cfg.domain.lo).maxCoeff() / (cfg.lattice_count - 1);
    const DistanceIndex index = stage("distance", [&] { return DistanceIndex(report.data, dx); });

    report.nodes = stage("grid", [&] {
        if (cfg.grid_mode == GridMode::Reduced) return build_reduced_grid(cfg.domain, cfg.lattice_count, index, cfg.delta_s);
        auto nodes = build_full_grid(cfg.domain, cfg.lattice_count);
        add_data_nodes(nodes, report.data);
        return nodes;
    });
    if (cfg.near_data_cutoff > 0.0) drop_near_data(report.nodes, index, cfg.near_data_cutoff * dx);

    const Vec center = report.data.centroid();
    if (cfg.initial_r) report.initial_radius = *cfg.initial_r;
    else if (cfg.initial_r_factor) report.initial_radius = data_initial_radius(report.data, center, *cfg.initial_r_factor);
    else report.initial_radius = default_initial_radius(cfg.domain, center);
    const double anchor_value = cfg.anchor_value.value_or(report.initial_radius * report.initial_radius);

    if (cfg.anchors) {
        stage("anchors", [&] {
            const double spacing = cfg.anchor_spacing.value_or(4.0 * dx);
            const double margin = cfg.anchor_margin.value_or(2.0 * cfg.delta_s);
            auto frame = place_anchors(cfg.domain, index, margin, spacing, anchor_value);
            for (auto& w : frame.warnings) report.warnings.push_back(w);
            attach_anchors(report.nodes, frame);
            return 0;
        });
    }

    auto ic = stage("initial condition", [&] { return initial_condition(report.nodes, report.initial_radius, center); });
    if (!ic.encloses_data)
        report.warnings.push_back("initial sphere does not enclose every data point");

    SchemeConfig scheme;
    scheme.dt = cfg.dt;
    scheme.singular_c = cfg.singular_c;
    scheme.singular_alpha = cfg.singular_alpha;
    scheme.max_iterations = cfg.iterations;
    scheme.stop_tolerance = cfg.stop_tolerance;
    scheme.limiter = cfg.limiter;

    report.kernel = cfg.kernel == KernelKind::Linear ? KernelSpec::linear()
                                                     : KernelSpec::multiquadric(cfg.rho_factor * dx);
    const auto coeffs = stage("coefficients", [&] { return sample_coefficients(report.nodes, &index, scheme); });
    report.seconds_setup = seconds_since(t_setup);

    const auto t_factor = Clock::now();
    const auto centers = report.nodes.centers();
    const Factorization fact = stage("factorization", [&] { return Factorization(centers, report.kernel); });
    report.seconds_factor = seconds_since(t_factor);

    double extract_seconds = 0.0;
    auto observe = [&](const LevelSetState& s) {
        if (progress) progress(s.iteration, s.history.back());
        const bool last = s.iteration == cfg.iterations;
        if (cfg.energy_every > 0 && s.iteration % cfg.energy_every == 0 && !last) {
            const auto t = Clock::now();
            const auto itp = fit(fact, center_values(report.nodes, s));
            extract_into(report, itp, cfg);
            report.energies.emplace_back(s.iteration, current_energy(report, index, cfg.dimension));
            extract_seconds += seconds_since(t);
        }
    };

    const auto t_run = Clock::now();
    auto result = stage("run", [&] { return run(report.nodes, fact, coeffs, scheme, ic.state, observe); });
    report.seconds_run = seconds_since(t_run) - extract_seconds;
    report.history = result.state.history;
    report.final_values = result.state.values;
    report.failure = result.failure;

    const auto t_extract = Clock::now();
    stage("extract", [&] {
        const auto itp = fit(fact, center_values(report.nodes, result.state));
        extract_into(report, itp, cfg);
        report.energies.emplace_back(result.state.iteration, current_energy(report, index, cfg.dimension));
        return 0;
    });
    report.seconds_extract = seconds_since(t_extract) + extract_seconds;

    if (!cfg.output_dir.empty()) stage("export", [&] { write_outputs(cfg, report); return 0; });
    return report;
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentReport& report)
{
    namespace fs = std::filesystem;
    const fs::path dir = cfg.output_dir;
    fs::create_directories(dir);

    if (cfg.dimension == 2) {
        write_polyline_csv(report.curve, dir / "geometry.csv");
        write_polyline_svg(report.curve, cfg.domain, dir / "geometry.svg", report.data.points());
    } else {
        write_obj(report.mesh, dir / "geometry.obj");
    }

    auto open = [&](const char* name) {
        std::FILE* f = std::fopen((dir / name).c_str(), "w");
        if (!f) throw Error("cannot write '" + (dir / name).string() + "'");
        return f;
    };
    auto close = [&](std::FILE* f, const char* name) {
        if (std::fclose(f) != 0) throw Error("error writing '" + (dir / name).string() + "'");
    };

    std::FILE* f = open("convergence.csv");
    std::fputs("iteration,E1\n", f);
    for (std::size_t n = 0; n < report.history.size(); ++n) std::fprintf(f, "%zu,%.17g\n", n + 1, report.history[n]);
    close(f, "convergence.csv");

    f = open("energy.csv");
    std::fputs("iteration,energy\n", f);
    for (const auto& [it, e] : report.energies) std::fprintf(f, "%d,%.17g\n", it, e);
    close(f, "energy.csv");

    write_node_dump(report.nodes, dir / "nodes.txt");
    write_field(report.nodes, report.kernel, report.final_values, dir / "field.txt");

    f = open("summary.txt");
    std::fprintf(f, "name: %s\n", report.name.c_str());
    std::fprintf(f, "data_points: %zu\n", report.data.size());
    std::fprintf(f, "lattice_nodes: %zu\n", report.nodes.lattice_size);
    std::fprintf(f, "grid_nodes: %zu\n", report.nodes.grid_count());
    std::fprintf(f, "data_nodes: %zu\n", report.nodes.data_count());
    std::fprintf(f, "anchor_nodes: %zu\n", report.nodes.anchors.size());
    std::fprintf(f, "dx: %.17g\n", report.dx());
    std::fprintf(f, "kernel: %s\n", kernel_name(report.kernel.kind).c_str());
    std::fprintf(f, "rho: %.17g\n", report.kernel.rho);
    std::fprintf(f, "initial_radius: %.17g\n", report.initial_radius);
    std::fprintf(f, "iterations: %zu\n", report.history.size());
    std::fprintf(f, "final_E1: %.17g\n", report.final_e1());
    if (!report.energies.empty()) std::fprintf(f, "final_energy: %.17g\n", report.energies.back().second);
    if (cfg.dimension == 2) {
        std::fprintf(f, "loops: %zu\n", report.curve.loops.size());
    } else {
        std::fprintf(f, "mesh_vertices: %zu\n", report.mesh.vertices.size());
        std::fprintf(f, "mesh_triangles: %zu\n", report.mesh.triangles.size());
    }
    std::fprintf(f, "seconds_setup: %.3f\n", report.seconds_setup);
    std::fprintf(f, "seconds_factor: %.3f\n", report.seconds_factor);
    std::fprintf(f, "seconds_run: %.3f\n", report.seconds_run);
    std::fprintf(f, "seconds_extract: %.3f\n", report.seconds_extract);
    for (const auto& w : report.warnings) std::fprintf(f, "warning: %s\n", w.c_str());
    if (report.failure) std::fprintf(f, "failure: %s\n", report.failure->c_str());
    close(f, "summary.txt");
}

// ---------------------------------------------------------------------------
// Field files

void write_field(const NodeSet& nodes, const KernelSpec& kernel, std::span<const double> values,
                 const std::filesystem::path& path)
{
    if (values.size() != nodes.interior_size()) throw Error("field values do not match the node set");
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error("cannot write '" + path.string() + "'");
    std::fprintf(f, "# dim %d\n# kernel %s\n# rho %.17g\n# domain", nodes.dim, kernel_name(kernel.kind).c_str(),
                 kernel.rho);
    for (int k = 0; k < nodes.dim; ++k) std::fprintf(f, " %.17g %.17g", nodes.domain.lo[k], nodes.domain.hi[k]);
    std::fputc('\n', f);
    auto line = [&](const char* kind, const Vec& x, double v) {
        std::fputs(kind, f);
        for (int k = 0; k < x.size(); ++k) std::fprintf(f, " %.17g", x[k]);
        std::fprintf(f, " %.17g\n", v);
    };
    for (std::size_t j = 0; j < nodes.interior_size(); ++j)
        line(nodes.kinds[j] == NodeKind::Grid ? "grid" : "data", nodes.interior[j], values[j]);
    for (const auto& a : nodes.anchors) line("anchor", a, nodes.anchor_value);
    if (std::fclose(f) != 0) throw Error("error writing '" + path.string() + "'");
}

FieldFile read_field(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot read field file '" + path.string() + "'");
    FieldFile field;
    std::string kernel = "multiquadric";
    double rho = 0.0;
    std::vector<double> domain;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string tok;
        if (!(ss >> tok)) continue;
        auto where = [&] { return path.string() + ":" + std::to_string(lineno); };
        if (tok == "#") {
            std::string key;
            ss >> key;
            if (key == "dim") ss >> field.dim;
            else if (key == "kernel") ss >> kernel;
            else if (key == "rho") ss >> rho;
            else if (key == "domain")
                for (double v; ss >> v;) domain.push_back(v);
            continue;
        }
        if (tok != "grid" && tok != "data" && tok != "anchor") throw Error(where() + ": unknown node kind '" + tok + "'");
        if (field.dim != 2 && field.dim != 3) throw Error(where() + ": missing '# dim' header");
        Vec x(field.dim);
        double v = 0.0;
        for (int k = 0; k < field.dim; ++k)
            if (!(ss >> x[k])) throw Error(where() + ": missing coordinate");
        if (!(ss >> v) || !std::isfinite(v)) throw Error(where() + ": missing or non-finite value");
        field.centers.push_back(x);
        field.values.push_back(v);
    }
    if (field.dim != 2 && field.dim != 3) throw Error(path.string() + ": missing '# dim' header");
    if (domain.size() != static_cast<std::size_t>(2 * field.dim)) throw Error(path.string() + ": missing '# domain' header");
    field.domain = Box{Vec(field.dim), Vec(field.dim)};
    for (int k = 0; k < field.dim; ++k) {
        field.domain.lo[k] = domain[2 * k];
        field.domain.hi[k] = domain[2 * k + 1];
    }
    field.kernel = parse_kernel(kernel) == KernelKind::Linear ? KernelSpec::linear() : KernelSpec::multiquadric(rho);
    return field;
}

} // namespace slrecon
