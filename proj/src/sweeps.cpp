#include "pcf/sweeps.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "pcf/elastomer.hpp"

namespace pcf {

namespace {

/// Approach height standing in for "just touching" when anchoring the
/// contact-detection reference range.
constexpr double kContactReferenceHeight = 0.05;

std::vector<double> grid(double lo, double hi, double step) {
    int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> values;
    values.reserve(static_cast<size_t>(std::max(n, 0)));
    for (int i = 0; i < n; ++i) values.push_back(lo + i * step);
    return values;
}

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

SweepRow measure_press(const ExperimentConfig& config, const std::string& kind,
                       double depth, double reflectivity) {
    SweepRow row;
    row.kind = kind == "auto" ? config.boundary_kind : kind;
    row.depth = depth;
    row.reflectivity = reflectivity;
    if (depth > 0.0) {
        row.force = force_from_depth(make_spring(config), depth);
        Scene scene = scene_for_press(config, kind, depth, reflectivity);
        row.distance = scene.target->distance;
        row.reading = simulate(scene);
    } else {
        // Zero depth: the target rests on the undeformed surface, zero force.
        row.distance = surface_height(config, kind);
        row.reading = simulate(scene_for_distance(config, kind, row.distance, reflectivity));
    }
    return row;
}

}  // namespace

double surface_height(const ExperimentConfig& config, const std::string& kind) {
    std::string k = kind == "auto" ? config.boundary_kind : kind;
    if (k == "none") return 0.0;
    ExperimentConfig resolved = config;
    resolved.boundary_kind = k;
    return resolved.resolved_thickness();
}

Scene scene_for_distance(const ExperimentConfig& config, const std::string& kind,
                         double distance, double reflectivity) {
    Scene scene = make_scene(config, kind);
    if (scene.boundary && distance < scene.boundary->thickness)
        throw std::invalid_argument(
            "scene_for_distance: free-space target below the boundary surface");
    TargetSpec target;
    target.distance = distance;
    target.reflectivity = reflectivity;
    target.half_width = config.target_half_width;
    scene.target = target;
    return scene;
}

Scene scene_for_press(const ExperimentConfig& config, const std::string& kind,
                      double depth, double reflectivity) {
    Scene scene = make_scene(config, kind);
    if (!scene.boundary)
        throw std::invalid_argument("scene_for_press: pressing requires a boundary");
    scene.indentation.depth = depth;
    TargetSpec target;
    target.distance = scene.boundary->thickness - depth;
    target.reflectivity = reflectivity;
    target.half_width = config.target_half_width;
    scene.target = target;
    return scene;
}

std::vector<SweepRow> run_proximity_sweep(const ExperimentConfig& config,
                                          const std::string& kind, double reflectivity) {
    double base = surface_height(config, kind);
    std::vector<SweepRow> rows;
    for (double h : grid(config.proximity_min, config.proximity_max, config.proximity_step)) {
        SweepRow row;
        row.kind = kind == "auto" ? config.boundary_kind : kind;
        row.distance = base + h;
        row.reflectivity = reflectivity;
        row.reading = simulate(scene_for_distance(config, kind, row.distance, reflectivity));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> run_proximity_matrix(const ExperimentConfig& config) {
    std::vector<SweepRow> rows;
    for (const char* kind : {"none", "flat", "blocker", "arc"})
        for (double reflectivity : config.reflectivities)
            for (auto& row : run_proximity_sweep(config, kind, reflectivity))
                rows.push_back(std::move(row));
    return rows;
}

std::vector<SweepRow> run_force_sweep(const ExperimentConfig& config,
                                      const std::vector<std::string>& kinds,
                                      const std::vector<double>& reflectivities) {
    std::vector<SweepRow> rows;
    for (const auto& kind : kinds)
        for (double reflectivity : reflectivities)
            for (double depth : grid(config.press_min, config.press_max, config.press_step))
                rows.push_back(measure_press(config, kind, depth, reflectivity));
    return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "config_kind,d_mm,rho,delta_mm,force_N,range_mm,intensity,crosstalk\n";
    for (const auto& row : rows) {
        out << row.kind << "," << fmt9(row.distance) << "," << fmt9(row.reflectivity) << ","
            << fmt9(row.depth) << "," << fmt9(row.force) << ","
            << (row.reading.range_valid ? fmt9(row.reading.range) : "nan") << ","
            << fmt9(row.reading.intensity) << "," << fmt9(row.reading.crosstalk) << "\n";
    }
}

PipelineOutcome run_full_pipeline(const ExperimentConfig& config, std::ostream* report) {
    PipelineOutcome outcome;
    auto say = [&](const std::string& line) {
        if (report) *report << line << "\n";
    };

    bool all_ok = true;

    // Stage 1: intensity fits, one reflectivity at a time.
    try {
        for (double rho : config.reflectivities) {
            auto rows = run_proximity_sweep(config, "auto", rho);
            std::vector<IntensitySample> samples;
            for (const auto& row : rows)
                if (row.reading.range_valid)
                    samples.push_back({row.reading.range, row.reading.intensity});
            IntensityFit fit = fit_intensity(samples, rho);
            say("calibrate: rho=" + fmt9(rho) + " kappa=" + fmt9(fit.kappa) +
                " zeta=" + fmt9(fit.zeta) + " chi=" + fmt9(fit.chi) +
                " rms=" + fmt9(fit.rms_residual) +
                (fit.converged ? " converged" : " not-converged"));
            outcome.fits.push_back(fit);
        }
    } catch (const std::exception& e) {
        say(std::string("calibrate: failed: ") + e.what());
        all_ok = false;
    }

    // Stage 2: read one proximity target back through the elastomer offset.
    try {
        outcome.true_distance = config.target_distance;
        outcome.true_reflectivity = config.target_reflectivity;
        Scene probe = scene_for_distance(config, "auto", config.target_distance,
                                         config.target_reflectivity);
        Reading reading = simulate(probe);
        if (!reading.range_valid)
            throw std::runtime_error("no light received from the probe target");
        outcome.apparent_range = reading.range;
        // Apparent range exceeds geometry by (n - 1) * thickness because the
        // through path crosses the elastomer twice at index n.
        double offset = probe.boundary ? (config.elastomer_index - config.air_index) *
                                             probe.boundary->thickness
                                       : 0.0;
        outcome.inferred_distance = reading.range - offset;
        say("proximity: true_d=" + fmt9(outcome.true_distance) +
            " apparent_range=" + fmt9(outcome.apparent_range) +
            " inferred_d=" + fmt9(outcome.inferred_distance) +
            " error=" + fmt9(outcome.inferred_distance - outcome.true_distance));

        // Stage 3: place the same observation within the fit family.
        if (outcome.fits.size() >= 2) {
            auto est =
                characterize_reflectivity(outcome.fits, reading.range, reading.intensity);
            outcome.inferred_reflectivity = est.reflectivity;
            outcome.reflectivity_extrapolated = est.extrapolated;
            say("reflectivity: true=" + fmt9(outcome.true_reflectivity) +
                " inferred=" + fmt9(est.reflectivity) +
                " error=" + fmt9(est.reflectivity - outcome.true_reflectivity) +
                (est.extrapolated ? " extrapolated" : ""));
        } else {
            throw std::runtime_error("too few fits for reflectivity characterization");
        }
    } catch (const std::exception& e) {
        say(std::string("proximity: failed: ") + e.what());
        all_ok = false;
    }

    // Stage 4: contact onset by apparent-range drop against the just-touching
    // reference, scanning the press grid from light to deep.
    try {
        double base = surface_height(config, "auto");
        Reading touch = simulate(scene_for_distance(
            config, "auto", base + kContactReferenceHeight, config.target_reflectivity));
        if (!touch.range_valid)
            throw std::runtime_error("no light received at the contact reference");
        outcome.contact_reference_range = touch.range;
        for (double depth :
             grid(config.force_grid_min, config.force_grid_max, config.force_grid_step)) {
            Reading pressed =
                simulate(scene_for_press(config, "auto", depth, config.target_reflectivity));
            if (pressed.range_valid &&
                pressed.range < outcome.contact_reference_range - config.contact_drop) {
                outcome.contact_detect_depth = depth;
                break;
            }
        }
        say("contact: reference_range=" + fmt9(outcome.contact_reference_range) +
            " detect_depth=" + fmt9(outcome.contact_detect_depth) + " detect_force=" +
            (outcome.contact_detect_depth >= 0.0
                 ? fmt9(force_from_depth(make_spring(config), outcome.contact_detect_depth))
                 : "none"));
        if (outcome.contact_detect_depth < 0.0)
            throw std::runtime_error("press grid never tripped the contact detector");
    } catch (const std::exception& e) {
        say(std::string("contact: failed: ") + e.what());
        all_ok = false;
    }

    // Stage 5: force from intensity via the monotone press table.
    try {
        std::vector<ForceTable::Knot> raw;
        for (double depth :
             grid(config.force_grid_min, config.force_grid_max, config.force_grid_step)) {
            Reading pressed =
                simulate(scene_for_press(config, "auto", depth, config.target_reflectivity));
            raw.push_back({pressed.intensity, force_from_depth(make_spring(config), depth)});
        }
        outcome.force_table = build_force_table(raw);
        if (outcome.force_table.knots.size() < 2)
            throw std::runtime_error("press response too flat for a force table");
        say("force: table_knots=" + std::to_string(outcome.force_table.knots.size()));

        for (double depth : {1.0, 2.0, 3.0, 4.0}) {
            Reading pressed =
                simulate(scene_for_press(config, "auto", depth, config.target_reflectivity));
            auto est = infer_force(outcome.force_table, pressed.intensity);
            PipelineOutcome::ForceCheck check;
            check.depth = depth;
            check.true_force = force_from_depth(make_spring(config), depth);
            check.inferred_force = est.force;
            check.saturated = est.saturated;
            outcome.force_checks.push_back(check);
            say("force: depth=" + fmt9(depth) + " true_F=" + fmt9(check.true_force) +
                " inferred_F=" + fmt9(check.inferred_force) +
                " error=" + fmt9(check.inferred_force - check.true_force) +
                (check.saturated ? " saturated" : ""));
        }
    } catch (const std::exception& e) {
        say(std::string("force: failed: ") + e.what());
        all_ok = false;
    }

    outcome.ok = all_ok;
    say(std::string("pipeline: ") + (all_ok ? "ok" : "incomplete"));
    return outcome;
}

}  // namespace pcf
