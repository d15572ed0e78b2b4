#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pcf {

/// One proximity measurement used for model fitting: the apparent range the
/// sensor reported and the intensity it collected.
struct IntensitySample {
    double range = 0.0;
    double intensity = 0.0;
};

/// Peak-shaped intensity-vs-range law I(d) = kappa*sqrt(d^2-zeta^2)/d^2 + chi
/// fitted to one reflectivity.
struct IntensityFit {
    double kappa = 0.0;
    double zeta = 0.0;
    double chi = 0.0;
    double reflectivity = 0.0;  ///< reflectivity the samples were taken at
    double rms_residual = 0.0;
    int iterations = 0;  ///< damped refinement iterations spent
    bool converged = false;  ///< gradient norm reached tolerance

    double evaluate(double range) const;
};

/// Fits the intensity law by damped Gauss-Newton with the analytic Jacobian,
/// initialized by an exact scan over zeta (kappa and chi are linear once zeta
/// is fixed) so the refinement starts inside its convergence basin.
/// Requires at least four samples spanning three distinct ranges.
IntensityFit fit_intensity(const std::vector<IntensitySample>& samples,
                           double reflectivity);

struct ReflectivityEstimate {
    double reflectivity = 0.0;
    bool extrapolated = false;  ///< intensity fell well outside the fit family
};

/// Places a (range, intensity) observation within a family of fits taken at
/// known reflectivities by interpolating between the two bracketing curves.
/// Fits must cover at least two distinct reflectivities.
ReflectivityEstimate characterize_reflectivity(const std::vector<IntensityFit>& fits,
                                               double range, double intensity);

/// Monotone intensity -> force lookup built from simulated presses.
/// Knots ascend in force while intensity strictly descends: pressing harder
/// dims the return, so brighter readings map to smaller forces.
struct ForceTable {
    struct Knot {
        double intensity = 0.0;
        double force = 0.0;
    };
    std::vector<Knot> knots;  ///< ascending force, strictly descending intensity

    bool empty() const { return knots.empty(); }
};

struct ForceEstimate {
    double force = 0.0;
    bool saturated = false;  ///< intensity outside the table's span
};

/// Builds the table from raw (intensity, force) pairs ordered by press depth.
/// Isotonic cleanup: pairs whose intensity fails to drop below every knot
/// kept so far are dropped rather than averaged.
ForceTable build_force_table(const std::vector<ForceTable::Knot>& raw);

/// Inverts the table by piecewise-linear interpolation, clamping outside.
ForceEstimate infer_force(const ForceTable& table, double intensity);

void write_intensity_fit(std::ostream& out, const IntensityFit& fit);
IntensityFit read_intensity_fit(std::istream& in);

void write_force_table(std::ostream& out, const ForceTable& table);
ForceTable read_force_table(std::istream& in);

}  // namespace pcf
