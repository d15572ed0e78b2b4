#pragma once

#include <variant>
#include <vector>

#include "pcf/geometry.hpp"

namespace pcf {

enum class BoundaryKind { Flat, Blocker, Arc };

/// Geometry of the undeformed elastomer-air interface. thickness is the height
/// of the boundary apex above the sensor plane; span is the lateral extent of
/// the pad. The arc is centred on the emitter's vertical so that with
/// arc_radius == thickness the emitter sits exactly at the arc's centre of
/// curvature. The blocker is an opaque vertical wall inside the pad.
struct BoundaryConfig {
    BoundaryKind kind = BoundaryKind::Arc;
    double thickness = 17.75;      // mm, sensor plane to apex
    double span = 12.0;            // mm, lateral extent of the pad
    double arc_radius = 17.75;     // mm, Arc only
    double arc_apex_x = -1.5;      // mm, Arc only; emitter x by default
    double blocker_height = 17.5;  // mm, Blocker only; must stay below thickness
    double blocker_x = 0.75;       // mm, Blocker only
};

/// Plane-indenter deformation state: the rigid flat object has pressed the
/// boundary down by depth millimetres.
struct Indentation {
    double depth = 0.0;  // mm, 0 <= depth < thickness
};

/// Linear spring contact model, force clamped at max_force.
struct SpringModel {
    double stiffness = 2.0;   // N per mm of indentation
    double max_force = 10.0;  // N
};

enum class SurfaceClass { Interface, Blocker };

struct BoundaryPiece {
    std::variant<Segment2, Arc2> shape;
    SurfaceClass surface = SurfaceClass::Interface;
    /// Unit normal on the air side, for segment pieces. Arc pieces use the
    /// outward radial at the hit point instead.
    Vec2 outward{0.0, 1.0};
};

struct Boundary {
    std::vector<BoundaryPiece> pieces;
};

/// Builds the possibly deformed interface. For depth > 0 the undeformed curve
/// is clipped by the horizontal plane at thickness - depth and the clipped
/// region is replaced by a flat segment at that height.
Boundary build_boundary(const BoundaryConfig& config, const Indentation& indentation);

double force_from_depth(const SpringModel& spring, double depth);
double depth_from_force(const SpringModel& spring, double force);

}  // namespace pcf
