#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pcf/calibration.hpp"
#include "pcf/config.hpp"

namespace pcf {

/// Height of the outer surface above the sensor plane for a boundary kind.
double surface_height(const ExperimentConfig& config, const std::string& kind = "auto");

/// Scene with a free-space target at an absolute height above the plane.
Scene scene_for_distance(const ExperimentConfig& config, const std::string& kind,
                         double distance, double reflectivity);

/// Scene with the target pressed into the boundary by the given depth.
Scene scene_for_press(const ExperimentConfig& config, const std::string& kind,
                      double depth, double reflectivity);

struct SweepRow {
    std::string kind;
    double distance = 0.0;      ///< absolute target height, mm
    double reflectivity = 0.0;
    double depth = 0.0;         ///< press depth, mm (0 for proximity rows)
    double force = 0.0;         ///< spring force, N (0 for proximity rows)
    Reading reading;
};

/// Proximity response over the configured grid of heights above the surface.
std::vector<SweepRow> run_proximity_sweep(const ExperimentConfig& config,
                                          const std::string& kind, double reflectivity);

/// Full proximity comparison: every boundary configuration (bare sensor
/// included) crossed with the configured reflectivity set.
std::vector<SweepRow> run_proximity_matrix(const ExperimentConfig& config);

/// Press response over the configured depth grid for each boundary kind and
/// reflectivity. A zero grid depth denotes a target resting on the surface
/// and carries zero force.
std::vector<SweepRow> run_force_sweep(const ExperimentConfig& config,
                                      const std::vector<std::string>& kinds,
                                      const std::vector<double>& reflectivities);

/// CSV with the fixed column set
/// config_kind,d_mm,rho,delta_mm,force_N,range_mm,intensity,crosstalk.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// End-to-end exercise: calibrate intensity fits per reflectivity, read a
/// proximity target back, characterize its reflectivity, find the contact
/// onset and invert press force from intensity.
struct PipelineOutcome {
    std::vector<IntensityFit> fits;

    double true_distance = 0.0;
    double apparent_range = 0.0;
    double inferred_distance = 0.0;

    double true_reflectivity = 0.0;
    double inferred_reflectivity = 0.0;
    bool reflectivity_extrapolated = false;

    double contact_reference_range = 0.0;
    double contact_detect_depth = -1.0;  ///< -1 when never flagged

    ForceTable force_table;
    struct ForceCheck {
        double depth = 0.0;
        double true_force = 0.0;
        double inferred_force = 0.0;
        bool saturated = false;
    };
    std::vector<ForceCheck> force_checks;

    bool ok = false;  ///< every stage completed
};

PipelineOutcome run_full_pipeline(const ExperimentConfig& config, std::ostream* report);

}  // namespace pcf
