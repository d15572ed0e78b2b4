#pragma once

#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pcf/sensor.hpp"

namespace pcf {

/// Sentinel for parameters that track another parameter until set explicitly.
inline constexpr double kAuto = std::numeric_limits<double>::quiet_NaN();
inline bool is_auto(double v) { return std::isnan(v); }

/// Every tunable of the simulator, calibrator and optimizer with its default.
/// Fields set to kAuto resolve against the rest of the configuration through
/// the resolved_* accessors. Serialized as sectioned key=value text.
struct ExperimentConfig {
    // [head]
    double emitter_x = -1.5;
    double receiver_x = 1.5;
    double half_fov_deg = 12.5;
    int fan_size = 181;
    int scatter_fan_size = 33;
    double aperture_half_width = 0.5;

    // [media]
    double air_index = 1.0;
    double elastomer_index = 1.41;

    // [boundary]
    std::string boundary_kind = "arc";  // arc | flat | blocker | none
    double thickness = kAuto;           // auto: 23.5 for blocker, else 17.75
    double span = 12.0;
    double arc_radius = kAuto;     // auto: thickness (apex focus at the plane)
    double arc_apex_x = kAuto;     // auto: emitter_x
    double blocker_height = kAuto; // auto: thickness - 6
    double blocker_x = kAuto;      // auto: 0.75, just left of the aperture

    // [target]
    double target_distance = 30.0;
    double target_reflectivity = 0.5;
    double target_half_width = 150.0;

    // [spring]
    double spring_stiffness = 2.0;  // N/mm
    double spring_max_force = 10.0; // N

    // [trace]
    double power_floor = 1e-6;
    int bounce_cap = 8;
    bool mc_scatter = false;
    std::uint64_t mc_seed = 0x9e3779b97f4a7c15ull;

    // [proximity_sweep]  target heights above the undeformed surface
    double proximity_min = 1.0;
    double proximity_max = 32.0;
    double proximity_step = 1.0;

    // [force_sweep]  press depths
    double press_min = 0.25;
    double press_max = 5.0;
    double press_step = 0.25;

    // [calibration]
    std::vector<double> reflectivities = {0.17, 0.5, 0.85};
    double contact_drop = 0.5;  // mm of apparent-range drop that flags contact
    double force_grid_min = 0.1;
    double force_grid_max = 5.0;
    double force_grid_step = 0.1;

    // [optimizer]
    double radius_min = 10.0;
    double radius_max = 30.0;
    double opt_thickness_min = kAuto;  // auto: thickness
    double opt_thickness_max = kAuto;  // auto: thickness
    int grid_points = 25;
    int refine_sweeps = 3;
    double crosstalk_weight = 1.0;
    double sensitivity_weight = 0.0;

    double resolved_thickness() const;
    double resolved_arc_radius() const;
    double resolved_arc_apex_x() const;
    double resolved_blocker_height() const;
    double resolved_blocker_x() const;
    double resolved_opt_thickness_min() const;
    double resolved_opt_thickness_max() const;
};

/// Throws std::invalid_argument naming the offending key when a value is out
/// of range or inconsistent.
void validate_config(const ExperimentConfig& config);

SensorHead make_head(const ExperimentConfig& config);

/// Resolved boundary description, or nullopt for kind "none". An explicit
/// kind argument overrides the configured one ("auto" keeps it).
std::optional<BoundaryConfig> make_boundary_config(const ExperimentConfig& config,
                                                   const std::string& kind = "auto");

SpringModel make_spring(const ExperimentConfig& config);

/// Bare scene: head, media, boundary and limits; no target, no indentation.
Scene make_scene(const ExperimentConfig& config, const std::string& kind = "auto");

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config_file(const std::string& path);
void write_config(std::ostream& out, const ExperimentConfig& config);

}  // namespace pcf
