#pragma once

#include <vector>

#include "pcf/sensor.hpp"

namespace pcf {

/// Search box for the arc boundary shape. Equal bounds collapse a dimension.
struct OptimBox {
    double radius_min = 10.0;
    double radius_max = 30.0;
    double thickness_min = 17.75;
    double thickness_max = 17.75;
};

/// Weights of the scalarized objective
/// crosstalk_weight * crosstalk - sensitivity_weight * force_sensitivity.
struct ObjectiveSpec {
    double crosstalk_weight = 1.0;
    double sensitivity_weight = 0.0;
};

struct OptimizerOptions {
    int grid_points = 25;      ///< coarse grid resolution per dimension
    int sweeps = 3;            ///< coordinate refinement passes
    double golden_tol = 1e-2;  ///< bracket width (mm) ending a refinement
    double sensitivity_rho = 0.5;
    std::vector<double> press_depths = {1.0, 2.0, 3.0, 4.0, 5.0};
};

struct OptimResult {
    /// One probed point of the objective landscape.
    struct Evaluation {
        double radius = 0.0;
        double thickness = 0.0;
        double crosstalk = 0.0;
        double sensitivity = 0.0;
        double objective = 0.0;
    };

    double radius = 0.0;
    double thickness = 0.0;
    double objective = 0.0;
    double crosstalk = 0.0;
    double sensitivity = 0.0;
    int evaluations = 0;
    std::vector<Evaluation> trace;  ///< every probe in evaluation order
};

/// Light returned by the bare boundary alone for an arc of the given shape.
/// The prototype supplies the head, media and limits; its boundary must be
/// an arc configuration.
double arc_crosstalk(const Scene& prototype, double radius, double thickness);

/// Mean |dI/d(depth)| of the contact response across the given press depths.
double arc_sensitivity(const Scene& prototype, double radius, double thickness,
                       double reflectivity, const std::vector<double>& depths);

/// Minimizes the scalarized objective over the box with an ascending-radius
/// coarse grid followed by per-coordinate golden-section sweeps. Ties keep
/// the smallest radius; refinements must strictly improve to be accepted.
OptimResult optimize_arc(const Scene& prototype, const OptimBox& box,
                         const ObjectiveSpec& weights,
                         const OptimizerOptions& options = {});

}  // namespace pcf
