#include "pcf/geometry.hpp"

namespace pcf {

std::optional<RayHit> intersect_ray_segment(const Point2& origin, const Vec2& dir,
                                            const Segment2& seg) {
    Vec2 e = seg.b - seg.a;
    double denom = cross(dir, e);
    if (std::abs(denom) < 1e-15) return std::nullopt;  // parallel or degenerate

    Vec2 ao = seg.a - origin;
    double t = cross(ao, e) / denom;
    double u = cross(ao, dir) / denom;
    if (t <= kHitEpsilon) return std::nullopt;
    if (u < -1e-12 || u > 1.0 + 1e-12) return std::nullopt;

    RayHit hit;
    hit.t = t;
    hit.point = origin + t * dir;
    Vec2 n = normalized(perp(e));
    if (dot(n, dir) > 0.0) n = -n;
    hit.normal = n;
    return hit;
}

std::optional<RayHit> intersect_ray_arc(const Point2& origin, const Vec2& dir,
                                        const Arc2& arc) {
    // |origin + t*dir - c|^2 = r^2 with unit dir.
    Vec2 oc = origin - arc.center;
    double b = dot(dir, oc);
    double c = dot(oc, oc) - arc.radius * arc.radius;
    double disc = b * b - c;
    if (disc < kGrazeDiscriminant) return std::nullopt;  // miss or tangential graze

    double root = std::sqrt(disc);
    for (double t : {-b - root, -b + root}) {
        if (t <= kHitEpsilon) continue;
        Point2 p = origin + t * dir;
        double angle = std::atan2(p.y - arc.center.y, p.x - arc.center.x);
        if (!arc.contains_angle(angle)) continue;

        RayHit hit;
        hit.t = t;
        hit.point = p;
        Vec2 n = normalized(p - arc.center);
        if (dot(n, dir) > 0.0) n = -n;
        hit.normal = n;
        return hit;
    }
    return std::nullopt;
}

}  // namespace pcf
