#include "pcf/elastomer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcf {

namespace {

void validate(const BoundaryConfig& config, const Indentation& indentation) {
    if (config.thickness <= 0.0) throw std::invalid_argument("boundary: thickness must be positive");
    if (config.span <= 0.0) throw std::invalid_argument("boundary: span must be positive");
    if (config.kind == BoundaryKind::Arc && config.arc_radius <= 0.0)
        throw std::invalid_argument("boundary: arc radius must be positive");
    if (config.kind == BoundaryKind::Blocker) {
        if (config.blocker_height <= 0.0 || config.blocker_height >= config.thickness)
            throw std::invalid_argument("boundary: blocker height must be in (0, thickness)");
        if (std::abs(config.blocker_x) > 0.5 * config.span)
            throw std::invalid_argument("boundary: blocker x outside the pad");
    }
    if (indentation.depth < 0.0 || indentation.depth >= config.thickness)
        throw std::invalid_argument("boundary: indentation depth must be in [0, thickness)");
}

BoundaryPiece flat_piece(double x0, double x1, double height) {
    BoundaryPiece piece;
    piece.shape = Segment2{{x0, height}, {x1, height}};
    piece.surface = SurfaceClass::Interface;
    piece.outward = {0.0, 1.0};
    return piece;
}

void append_arc_pieces(std::vector<BoundaryPiece>& pieces, const BoundaryConfig& config,
                       double depth) {
    double w = 0.5 * config.span;
    double r = config.arc_radius;
    double cx = config.arc_apex_x;
    double cy = config.thickness - r;

    auto clamp01 = [](double v) { return std::clamp(v, -1.0, 1.0); };
    // Upper-half angles of the covered lateral extent; left edge has the
    // larger angle.
    double phi_right = std::acos(clamp01((w - cx) / r));
    double phi_left = std::acos(clamp01((-w - cx) / r));

    auto arc_piece = [&](double start, double span) {
        BoundaryPiece piece;
        piece.shape = Arc2{{cx, cy}, r, start, span};
        piece.surface = SurfaceClass::Interface;
        return piece;
    };

    if (depth <= 0.0) {
        pieces.push_back(arc_piece(phi_right, phi_left - phi_right));
        return;
    }

    // Clip at height h: arc points with sin(angle) above sin_cut are pressed
    // flat. The cut angles are clamped into the covered extent so a cut below
    // an edge flattens that whole side.
    double h = config.thickness - depth;
    double sin_cut = (h - cy) / r;
    double phi_cut_right = std::asin(clamp01(sin_cut));
    double phi_cut_left = M_PI - phi_cut_right;
    double a_right = std::clamp(phi_cut_right, phi_right, phi_left);
    double a_left = std::clamp(phi_cut_left, phi_right, phi_left);

    double cap_x0 = cx + r * std::cos(a_left);
    double cap_x1 = cx + r * std::cos(a_right);

    if (a_left < phi_left - 1e-12) pieces.push_back(arc_piece(a_left, phi_left - a_left));
    if (cap_x1 - cap_x0 > 1e-12) pieces.push_back(flat_piece(cap_x0, cap_x1, h));
    if (a_right > phi_right + 1e-12) pieces.push_back(arc_piece(phi_right, a_right - phi_right));
}

}  // namespace

Boundary build_boundary(const BoundaryConfig& config, const Indentation& indentation) {
    validate(config, indentation);

    double w = 0.5 * config.span;
    double surface_height = config.thickness - indentation.depth;

    Boundary boundary;
    switch (config.kind) {
        case BoundaryKind::Flat:
            boundary.pieces.push_back(flat_piece(-w, w, surface_height));
            break;
        case BoundaryKind::Blocker: {
            boundary.pieces.push_back(flat_piece(-w, w, surface_height));
            BoundaryPiece wall;
            wall.shape = Segment2{{config.blocker_x, 0.0}, {config.blocker_x, config.blocker_height}};
            wall.surface = SurfaceClass::Blocker;
            wall.outward = {1.0, 0.0};
            boundary.pieces.push_back(wall);
            break;
        }
        case BoundaryKind::Arc:
            append_arc_pieces(boundary.pieces, config, indentation.depth);
            break;
    }
    return boundary;
}

double force_from_depth(const SpringModel& spring, double depth) {
    if (depth < 0.0) throw std::invalid_argument("force_from_depth: negative depth");
    if (spring.stiffness <= 0.0 || spring.max_force <= 0.0)
        throw std::invalid_argument("force_from_depth: spring parameters must be positive");
    return std::min(spring.stiffness * depth, spring.max_force);
}

double depth_from_force(const SpringModel& spring, double force) {
    if (spring.stiffness <= 0.0 || spring.max_force <= 0.0)
        throw std::invalid_argument("depth_from_force: spring parameters must be positive");
    if (force < 0.0 || force > spring.max_force)
        throw std::invalid_argument("depth_from_force: force outside [0, max_force]");
    return force / spring.stiffness;
}

}  // namespace pcf
