#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pcf/elastomer.hpp"
#include "pcf/optics.hpp"

namespace pcf {

/// Emitter and receiver share the sensor plane y = 0 and both point straight
/// up. half_fov bounds both the emission fan and the receiver acceptance cone.
struct SensorHead {
    Point2 emitter{-1.5, 0.0};
    Point2 receiver{1.5, 0.0};
    double half_fov = 12.5 * M_PI / 180.0;  // radians
    int fan_size = 181;                     // emitted rays
    int scatter_fan_size = 33;              // Lambertian fan per target hit
    double aperture_half_width = 0.5;       // mm, receiver window on the plane

    double separation() const { return receiver.x - emitter.x; }
};

struct TargetSpec {
    double distance = 30.0;    // mm above the sensor plane
    double reflectivity = 0.5; // Lambertian albedo in [0, 1]
    double half_width = 150.0; // mm lateral extent of the target plane
};

struct TraceLimits {
    double power_floor = 1e-6;
    int bounce_cap = 8;
};

/// Scatter sampling mode. The stratified fan is the deterministic default;
/// Monte Carlo sampling exists to cross-check its convergence.
struct ScatterMode {
    bool monte_carlo = false;
    std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

/// Full scene description. Without a boundary the sensor is bare and the
/// emitter sits in air; with one it sits inside the elastomer. When the
/// indentation depth is positive the target is the indenting plane and its
/// distance must equal thickness - depth; make_scene-style constructors
/// enforce that, trace assumes it.
struct Scene {
    SensorHead head;
    Medium air{1.0};
    Medium elastomer{1.41};
    std::optional<BoundaryConfig> boundary;
    Indentation indentation;
    std::optional<TargetSpec> target;
    TraceLimits limits;
    ScatterMode scatter;
};

enum class RecordTag { BoundaryCrosstalk, TargetReturn };

struct PhotonRecord {
    double power = 0.0;
    double optical_path = 0.0;  // mm, emitter to receiver
    int bounce_count = 0;
    RecordTag tag = RecordTag::BoundaryCrosstalk;
};

/// Non-received power buckets, for conservation checks.
struct TraceStats {
    double received = 0.0;
    double absorbed = 0.0;
    double escaped = 0.0;
    double terminated = 0.0;
};

/// One straight flight leg of a traced branch, for diagram rendering.
struct TraceSegment {
    Point2 from;
    Point2 to;
    double power = 0.0;
};

struct TraceLog {
    std::vector<TraceSegment> segments;
};

/// Synthesized sensor output. range is half the power-weighted mean optical
/// path over all records, crosstalk included, so boundary reflections corrupt
/// the range exactly as they would in the device. range is NaN and
/// range_valid false when nothing was received.
struct Reading {
    double range = 0.0;
    bool range_valid = false;
    double intensity = 0.0;
    double crosstalk = 0.0;
    std::vector<PhotonRecord> records;
};

/// N rays of power 1/N with directions endpoint-inclusive uniform over
/// [-half_fov, +half_fov] about straight up.
std::vector<Ray2> emit_fan(const SensorHead& head, bool inside_elastomer,
                           double elastomer_index);

std::vector<PhotonRecord> trace(const Scene& scene, const std::vector<Ray2>& rays,
                                TraceStats* stats = nullptr, TraceLog* log = nullptr);

Reading synthesize_reading(const std::vector<PhotonRecord>& records);

/// Emit, trace and synthesize in one step.
Reading simulate(const Scene& scene, TraceStats* stats = nullptr, TraceLog* log = nullptr);

/// Chord-based approximation of the emitter/receiver viewing overlap at the
/// plane where both cones have radius r and their centres sit separation
/// apart: (separation/2) * sqrt(4 r^2 - separation^2), zero once the cones
/// separate. Kept deliberately in this closed form; the exact lens area of
/// two overlapping discs differs from it.
double analytic_view_area(double separation, double cone_radius);

/// Closed-form intensity model kappa * sqrt(d^2 - zeta^2) / d^2 + chi with the
/// radicand clamped at zero, so the value is chi for d <= zeta. Maximum at
/// d = zeta * sqrt(2).
double analytic_intensity(double distance, double kappa, double zeta, double chi);

}  // namespace pcf
