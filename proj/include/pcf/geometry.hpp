#pragma once

#include <cmath>
#include <optional>

namespace pcf {

/// Millimetre-scale tolerance used to reject self-intersections right at a
/// surface: hits closer than this along the ray are ignored.
inline constexpr double kHitEpsilon = 1e-9;

/// Discriminant threshold below which a ray-circle contact counts as a
/// tangential graze and is treated as a miss.
inline constexpr double kGrazeDiscriminant = 1e-12;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
};

using Point2 = Vec2;

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

/// Scalar z-component of the 3D cross product; sign gives orientation.
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

inline double norm(const Vec2& v) { return std::sqrt(dot(v, v)); }

inline Vec2 normalized(const Vec2& v) {
    double n = norm(v);
    return {v.x / n, v.y / n};
}

/// Counter-clockwise perpendicular.
inline Vec2 perp(const Vec2& v) { return {-v.y, v.x}; }

struct Segment2 {
    Point2 a;
    Point2 b;
};

/// Circular arc, counter-clockwise from start_angle over span radians.
struct Arc2 {
    Point2 center;
    double radius = 0.0;
    double start_angle = 0.0;
    double span = 0.0;

    Point2 point_at(double angle) const {
        return {center.x + radius * std::cos(angle), center.y + radius * std::sin(angle)};
    }
    bool contains_angle(double angle) const {
        double twopi = 2.0 * M_PI;
        double rel = std::fmod(angle - start_angle, twopi);
        if (rel < 0.0) rel += twopi;
        return rel <= span + 1e-12;
    }
};

/// Intersection result. normal is unit length and oriented against the
/// incoming ray direction.
struct RayHit {
    double t = 0.0;
    Point2 point;
    Vec2 normal;
};

std::optional<RayHit> intersect_ray_segment(const Point2& origin, const Vec2& dir,
                                            const Segment2& seg);

std::optional<RayHit> intersect_ray_arc(const Point2& origin, const Vec2& dir,
                                        const Arc2& arc);

}  // namespace pcf
