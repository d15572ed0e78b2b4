#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pcf/config.hpp"
#include "pcf/optimizer.hpp"
#include "pcf/svg.hpp"
#include "pcf/sweeps.hpp"

namespace {

using pcf::ExperimentConfig;

/// Streams to the named file, or to stdout for "-".
void with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    if (path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    fn(out);
}

pcf::Scene scene_for_args(const ExperimentConfig& config, const std::string& kind,
                          double distance, double depth, double rho, bool no_target) {
    if (depth > 0.0) return pcf::scene_for_press(config, kind, depth, rho);
    if (no_target) return pcf::make_scene(config, kind);
    return pcf::scene_for_distance(config, kind, distance, rho);
}

void print_reading(const pcf::Reading& reading, const pcf::TraceStats& stats) {
    std::ostringstream out;
    out.precision(9);
    if (reading.range_valid)
        out << "range_mm=" << reading.range << "\n";
    else
        out << "range_mm=nan\n";
    out << "intensity=" << reading.intensity << "\n";
    out << "crosstalk=" << reading.crosstalk << "\n";
    out << "records=" << reading.records.size() << "\n";
    out << "received=" << stats.received << " absorbed=" << stats.absorbed
        << " escaped=" << stats.escaped << " terminated=" << stats.terminated << "\n";
    std::cout << out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D ray-optics simulator for an elastomer-covered "
                 "proximity/contact/force optical sensor"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "configuration file (sectioned key=value)");

    std::string kind = "auto";
    double distance = 30.0;
    double depth = 0.0;
    double rho = -1.0;
    bool no_target = false;
    std::string out_path = "-";
    std::vector<std::string> kinds;

    auto add_scene_options = [&](CLI::App* cmd, bool with_press) {
        cmd->add_option("--kind", kind, "boundary kind: arc, flat, blocker, none or auto");
        cmd->add_option("--distance", distance, "absolute target height above the plane, mm");
        if (with_press)
            cmd->add_option("--depth", depth, "press depth into the boundary, mm");
        cmd->add_option("--rho", rho, "target reflectivity (default from config)");
    };

    auto* sim = app.add_subcommand("simulate", "one reading for a single scene");
    add_scene_options(sim, true);
    sim->add_flag("--no-target", no_target, "bare boundary, crosstalk only");

    auto* sweep_prox = app.add_subcommand(
        "sweep-proximity", "intensity and range across target heights, CSV");
    sweep_prox->add_option("--kind", kind, "boundary kind");
    sweep_prox->add_option("--rho", rho, "target reflectivity");
    sweep_prox->add_option("--out", out_path, "output path or - for stdout");

    auto* sweep_force =
        app.add_subcommand("sweep-force", "press response across boundary kinds, CSV");
    sweep_force->add_option("--kinds", kinds, "boundary kinds to compare")
        ->delimiter(',');
    sweep_force->add_option("--rho", rho, "target reflectivity");
    sweep_force->add_option("--out", out_path, "output path or - for stdout");

    auto* diagram = app.add_subcommand("trace-diagram", "SVG ray diagram of one scene");
    add_scene_options(diagram, true);
    diagram->add_flag("--no-target", no_target, "bare boundary");
    diagram->add_option("--out", out_path, "output path or - for stdout");

    auto* fit_cmd = app.add_subcommand(
        "fit", "calibrate the intensity-range law at one reflectivity");
    fit_cmd->add_option("--kind", kind, "boundary kind");
    fit_cmd->add_option("--rho", rho, "target reflectivity");
    fit_cmd->add_option("--out", out_path, "output path or - for stdout");

    auto* optimize = app.add_subcommand(
        "optimize", "search arc shapes for low crosstalk and high sensitivity");
    std::string trace_path;
    optimize->add_option("--trace-out", trace_path,
                         "write every probed shape as CSV, - for stdout");

    auto* pipeline = app.add_subcommand(
        "pipeline", "calibrate, measure, characterize, detect contact, infer force");

    auto* show = app.add_subcommand("show-config", "print the effective configuration");

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig config =
            config_path.empty() ? ExperimentConfig{} : pcf::load_config_file(config_path);
        pcf::validate_config(config);
        if (rho < 0.0) rho = config.target_reflectivity;
        if (rho > 1.0) throw std::invalid_argument("--rho outside [0, 1]");

        if (sim->parsed()) {
            pcf::Scene scene = scene_for_args(config, kind, distance, depth, rho, no_target);
            pcf::TraceStats stats;
            pcf::Reading reading = pcf::simulate(scene, &stats);
            print_reading(reading, stats);
        } else if (sweep_prox->parsed()) {
            // Bare subcommand compares every configuration at every
            // reflectivity; --kind/--rho narrow to a single curve.
            auto rows = sweep_prox->count("--kind") == 0 && sweep_prox->count("--rho") == 0
                            ? pcf::run_proximity_matrix(config)
                            : pcf::run_proximity_sweep(config, kind, rho);
            with_output(out_path, [&](std::ostream& out) { pcf::write_csv(out, rows); });
        } else if (sweep_force->parsed()) {
            if (kinds.empty()) kinds = {"flat", "blocker", "arc"};
            std::vector<double> rhos = sweep_force->count("--rho") == 0
                                           ? config.reflectivities
                                           : std::vector<double>{rho};
            auto rows = pcf::run_force_sweep(config, kinds, rhos);
            with_output(out_path, [&](std::ostream& out) { pcf::write_csv(out, rows); });
        } else if (diagram->parsed()) {
            pcf::Scene scene = scene_for_args(config, kind, distance, depth, rho, no_target);
            pcf::TraceLog log;
            pcf::simulate(scene, nullptr, &log);
            std::string svg = pcf::render_ray_diagram(scene, log);
            with_output(out_path, [&](std::ostream& out) { out << svg; });
        } else if (fit_cmd->parsed()) {
            auto rows = pcf::run_proximity_sweep(config, kind, rho);
            std::vector<pcf::IntensitySample> samples;
            for (const auto& row : rows)
                if (row.reading.range_valid)
                    samples.push_back({row.reading.range, row.reading.intensity});
            pcf::IntensityFit fit = pcf::fit_intensity(samples, rho);
            with_output(out_path,
                        [&](std::ostream& out) { pcf::write_intensity_fit(out, fit); });
        } else if (optimize->parsed()) {
            pcf::Scene prototype = pcf::make_scene(config, "arc");
            pcf::OptimBox box{config.radius_min, config.radius_max,
                              config.resolved_opt_thickness_min(),
                              config.resolved_opt_thickness_max()};
            pcf::ObjectiveSpec weights{config.crosstalk_weight, config.sensitivity_weight};
            pcf::OptimizerOptions options;
            options.grid_points = config.grid_points;
            options.sweeps = config.refine_sweeps;
            pcf::OptimResult result = pcf::optimize_arc(prototype, box, weights, options);
            if (!trace_path.empty()) {
                with_output(trace_path, [&](std::ostream& out) {
                    out << "radius_mm,thickness_mm,crosstalk,sensitivity,objective\n";
                    char line[192];
                    for (const auto& e : result.trace) {
                        std::snprintf(line, sizeof line, "%.9g,%.9g,%.9g,%.9g,%.9g\n",
                                      e.radius, e.thickness, e.crosstalk, e.sensitivity,
                                      e.objective);
                        out << line;
                    }
                });
            }
            std::cout.precision(9);
            std::cout << "optimal_radius=" << result.radius << "\n"
                      << "optimal_thickness=" << result.thickness << "\n"
                      << "objective=" << result.objective << "\n"
                      << "crosstalk=" << result.crosstalk << "\n"
                      << "sensitivity=" << result.sensitivity << "\n"
                      << "evaluations=" << result.evaluations << "\n";
        } else if (pipeline->parsed()) {
            pcf::PipelineOutcome outcome = pcf::run_full_pipeline(config, &std::cout);
            return outcome.ok ? 0 : 1;
        } else if (show->parsed()) {
            pcf::write_config(std::cout, config);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
