#include "pcf/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pcf {

namespace {

constexpr double kCoincidentTol = 1e-9;

struct HitCandidate {
    double t = std::numeric_limits<double>::infinity();
    // Lower kinds win ties so the boundary owns points shared with the
    // coincident indenter plane.
    enum Kind { None = -1, Piece = 0, TargetBelow = 1, TargetAbove = 2, Plane = 3 } kind = None;
    int piece_index = -1;
    RayHit hit;
};

double plane_half_width(const Scene& scene) {
    return scene.boundary ? 0.5 * scene.boundary->span : 6.0;
}

bool contact_active(const Scene& scene) {
    return scene.indentation.depth > 0.0 && scene.target && scene.boundary;
}

/// True for a horizontal interface segment lying on the indenter plane; such
/// pieces are in optical contact with the target and scatter directly.
bool is_contact_piece(const BoundaryPiece& piece, const Scene& scene) {
    if (piece.surface != SurfaceClass::Interface) return false;
    const auto* seg = std::get_if<Segment2>(&piece.shape);
    if (!seg) return false;
    if (std::abs(seg->a.y - seg->b.y) > kCoincidentTol) return false;
    return std::abs(seg->a.y - scene.target->distance) <= kCoincidentTol;
}

void consider_piece(HitCandidate& best, const Point2& origin, const Vec2& dir,
                    const BoundaryPiece& piece, int index) {
    std::optional<RayHit> hit;
    if (const auto* seg = std::get_if<Segment2>(&piece.shape))
        hit = intersect_ray_segment(origin, dir, *seg);
    else
        hit = intersect_ray_arc(origin, dir, std::get<Arc2>(piece.shape));
    if (!hit) return;
    bool closer = hit->t < best.t - kHitEpsilon;
    bool tie_wins = std::abs(hit->t - best.t) <= kHitEpsilon && HitCandidate::Piece < best.kind;
    if (closer || tie_wins) {
        best.t = hit->t;
        best.kind = HitCandidate::Piece;
        best.piece_index = index;
        best.hit = *hit;
    }
}

void consider_plane_crossing(HitCandidate& best, const Point2& origin, const Vec2& dir,
                             double plane_y, double x_center, double half_width,
                             HitCandidate::Kind kind) {
    double dy = plane_y - origin.y;
    if (dir.y == 0.0) return;
    double t = dy / dir.y;
    if (t <= kHitEpsilon) return;
    double x = origin.x + t * dir.x;
    if (std::abs(x - x_center) > half_width) return;
    bool closer = t < best.t - kHitEpsilon;
    bool tie_wins = std::abs(t - best.t) <= kHitEpsilon && kind < best.kind;
    if (closer || tie_wins) {
        best.t = t;
        best.kind = kind;
        best.piece_index = -1;
        best.hit = RayHit{t, {x, plane_y}, {0.0, dir.y > 0.0 ? -1.0 : 1.0}};
    }
}

/// Distance at which an escaping ray leaves the drawing box, for diagrams.
double escape_length(const Scene& scene, const Point2& origin, const Vec2& dir) {
    double ymax = 25.0;
    if (scene.boundary) ymax = std::max(ymax, scene.boundary->thickness + 10.0);
    if (scene.target) ymax = std::max(ymax, scene.target->distance + 10.0);
    double xmax = plane_half_width(scene) + 10.0;
    double best = 80.0;
    auto clip = [&](double delta, double component) {
        if (component != 0.0) {
            double t = delta / component;
            if (t > 0.0) best = std::min(best, t);
        }
    };
    clip(ymax - origin.y, dir.y);
    clip(-3.0 - origin.y, dir.y);
    clip(xmax - origin.x, dir.x);
    clip(-xmax - origin.x, dir.x);
    return best;
}

struct Tracer {
    const Scene& scene;
    TraceStats stats;
    TraceLog* log = nullptr;
    std::vector<PhotonRecord> records;
    std::vector<Ray2> stack;
    Boundary boundary;
    bool contact = false;
    std::uint64_t scatter_events = 0;

    explicit Tracer(const Scene& s) : scene(s) {
        if (scene.boundary) boundary = build_boundary(*scene.boundary, scene.indentation);
        contact = contact_active(scene);
    }

    void log_leg(const Point2& from, const Point2& to, double power) {
        if (log) log->segments.push_back({from, to, power});
    }

    /// Applies the power floor and bounce cap before a child enters the stack.
    void spawn(const Ray2& child) {
        if (child.power < scene.limits.power_floor) {
            stats.terminated += child.power;
            return;
        }
        if (child.bounce_count > scene.limits.bounce_cap) {
            stats.terminated += child.power;
            return;
        }
        stack.push_back(child);
    }

    void scatter_at(const Ray2& ray, const Point2& point, double path, const Vec2& normal,
                    double reflectivity, double medium_index) {
        stats.absorbed += ray.power * (1.0 - reflectivity);
        std::vector<Ray2> fan;
        if (scene.scatter.monte_carlo) {
            fan = lambertian_scatter_mc(point, normal, ray.power, reflectivity,
                                        scene.head.scatter_fan_size,
                                        scene.scatter.seed + scatter_events);
            ++scatter_events;
        } else {
            fan = lambertian_scatter(point, normal, ray.power, reflectivity,
                                     scene.head.scatter_fan_size);
        }
        for (auto it = fan.rbegin(); it != fan.rend(); ++it) {
            Ray2 child = *it;
            child.optical_path = path;
            child.bounce_count = ray.bounce_count + 1;
            child.medium_index = medium_index;
            child.hit_target = true;
            spawn(child);
        }
    }

    void interface_event(const Ray2& ray, const RayHit& hit, double path, const Vec2& outward) {
        bool leaving = dot(ray.direction, outward) > 0.0;
        double n1 = leaving ? scene.elastomer.refractive_index : scene.air.refractive_index;
        double n2 = leaving ? scene.air.refractive_index : scene.elastomer.refractive_index;

        double cos1 = std::min(1.0, -dot(ray.direction, hit.normal));
        FresnelSplit split = fresnel_unpolarized(cos1, n1, n2);

        Ray2 transmitted;  // pushed first so the reflected branch is traced first
        bool has_transmitted = false;
        if (split.transmittance > 0.0) {
            if (auto dir = refract(ray.direction, hit.normal, n1, n2)) {
                transmitted = ray;
                transmitted.origin = hit.point;
                transmitted.direction = normalized(*dir);
                transmitted.power = ray.power * split.transmittance;
                transmitted.optical_path = path;
                transmitted.bounce_count = ray.bounce_count + 1;
                transmitted.medium_index = n2;
                has_transmitted = true;
            }
        }
        if (has_transmitted) spawn(transmitted);

        Ray2 reflected = ray;
        reflected.origin = hit.point;
        reflected.direction = reflect(ray.direction, hit.normal);
        reflected.power = ray.power * split.reflectance;
        reflected.optical_path = path;
        reflected.bounce_count = ray.bounce_count + 1;
        spawn(reflected);
    }

    void plane_event(const Ray2& ray, const RayHit& hit, double path) {
        const SensorHead& head = scene.head;
        bool in_aperture = std::abs(hit.point.x - head.receiver.x) <= head.aperture_half_width;
        bool in_cone = -ray.direction.y >= std::cos(head.half_fov) - 1e-12;
        if (in_aperture && in_cone) {
            stats.received += ray.power;
            records.push_back({ray.power, path, ray.bounce_count,
                               ray.hit_target ? RecordTag::TargetReturn
                                              : RecordTag::BoundaryCrosstalk});
        } else {
            stats.absorbed += ray.power;
        }
    }

    void step(const Ray2& ray) {
        HitCandidate best;
        for (size_t i = 0; i < boundary.pieces.size(); ++i)
            consider_piece(best, ray.origin, ray.direction, boundary.pieces[i],
                           static_cast<int>(i));
        if (scene.target) {
            double ty = scene.target->distance;
            if (ray.origin.y < ty - kHitEpsilon && ray.direction.y > 0.0)
                consider_plane_crossing(best, ray.origin, ray.direction, ty, 0.0,
                                        scene.target->half_width, HitCandidate::TargetBelow);
            if (ray.origin.y > ty + kHitEpsilon && ray.direction.y < 0.0)
                consider_plane_crossing(best, ray.origin, ray.direction, ty, 0.0,
                                        scene.target->half_width, HitCandidate::TargetAbove);
        }
        if (ray.direction.y < 0.0)
            consider_plane_crossing(best, ray.origin, ray.direction, 0.0, 0.0,
                                    plane_half_width(scene), HitCandidate::Plane);

        if (best.kind == HitCandidate::None) {
            stats.escaped += ray.power;
            log_leg(ray.origin, ray.origin + escape_length(scene, ray.origin, ray.direction) *
                                                ray.direction, ray.power);
            return;
        }

        double path = ray.optical_path + best.t * ray.medium_index;
        log_leg(ray.origin, best.hit.point, ray.power);

        switch (best.kind) {
            case HitCandidate::Piece: {
                const BoundaryPiece& piece = boundary.pieces[best.piece_index];
                if (piece.surface == SurfaceClass::Blocker) {
                    stats.absorbed += ray.power;
                } else if (contact && is_contact_piece(piece, scene)) {
                    // Optical contact: the flattened cap is fused with the
                    // indenter, light scatters off the object without a
                    // Fresnel interface and stays inside the elastomer.
                    scatter_at(ray, best.hit.point, path, {0.0, -1.0},
                               scene.target->reflectivity, scene.elastomer.refractive_index);
                } else {
                    Vec2 outward;
                    if (const auto* seg = std::get_if<Segment2>(&piece.shape)) {
                        (void)seg;
                        outward = piece.outward;
                    } else {
                        outward = normalized(best.hit.point - std::get<Arc2>(piece.shape).center);
                    }
                    interface_event(ray, best.hit, path, outward);
                }
                break;
            }
            case HitCandidate::TargetBelow:
                scatter_at(ray, best.hit.point, path, {0.0, -1.0}, scene.target->reflectivity,
                           ray.medium_index);
                break;
            case HitCandidate::TargetAbove:
                stats.absorbed += ray.power;
                break;
            case HitCandidate::Plane:
                plane_event(ray, best.hit, path);
                break;
            case HitCandidate::None:
                break;
        }
    }

    void run(const std::vector<Ray2>& rays) {
        for (auto it = rays.rbegin(); it != rays.rend(); ++it) stack.push_back(*it);
        while (!stack.empty()) {
            Ray2 ray = stack.back();
            stack.pop_back();
            step(ray);
        }
    }
};

void validate_scene(const Scene& scene) {
    const SensorHead& head = scene.head;
    if (head.fan_size < 3) throw std::invalid_argument("scene: fan_size must be >= 3");
    if (head.scatter_fan_size < 1)
        throw std::invalid_argument("scene: scatter_fan_size must be >= 1");
    if (head.half_fov <= 0.0 || head.half_fov >= 0.5 * M_PI)
        throw std::invalid_argument("scene: half_fov must be in (0, pi/2)");
    if (head.aperture_half_width <= 0.0)
        throw std::invalid_argument("scene: aperture_half_width must be positive");
    if (head.receiver.x <= head.emitter.x)
        throw std::invalid_argument("scene: receiver must sit right of the emitter");
    if (scene.air.refractive_index <= 0.0 || scene.elastomer.refractive_index <= 0.0)
        throw std::invalid_argument("scene: refractive indices must be positive");
    if (scene.target) {
        if (scene.target->distance <= 0.0)
            throw std::invalid_argument("scene: target distance must be positive");
        if (scene.target->reflectivity < 0.0 || scene.target->reflectivity > 1.0)
            throw std::invalid_argument("scene: target reflectivity outside [0,1]");
    }
    if (scene.indentation.depth > 0.0) {
        if (!scene.boundary)
            throw std::invalid_argument("scene: indentation requires an elastomer boundary");
        if (scene.target) {
            double expected = scene.boundary->thickness - scene.indentation.depth;
            if (std::abs(scene.target->distance - expected) > kCoincidentTol)
                throw std::invalid_argument(
                    "scene: indented target distance must equal thickness - depth");
        }
    }
    if (scene.limits.power_floor <= 0.0 || scene.limits.bounce_cap < 1)
        throw std::invalid_argument("scene: invalid trace limits");
}

}  // namespace

std::vector<Ray2> emit_fan(const SensorHead& head, bool inside_elastomer,
                           double elastomer_index) {
    if (head.fan_size < 3) throw std::invalid_argument("emit_fan: fan_size must be >= 3");
    if (head.half_fov <= 0.0 || head.half_fov >= 0.5 * M_PI)
        throw std::invalid_argument("emit_fan: half_fov must be in (0, pi/2)");

    std::vector<Ray2> rays;
    rays.reserve(static_cast<size_t>(head.fan_size));
    int n = head.fan_size;
    for (int k = 0; k < n; ++k) {
        double angle = -head.half_fov + 2.0 * head.half_fov * k / (n - 1);
        Ray2 ray;
        ray.origin = head.emitter;
        ray.direction = {std::sin(angle), std::cos(angle)};
        ray.power = 1.0 / n;
        ray.medium_index = inside_elastomer ? elastomer_index : 1.0;
        rays.push_back(ray);
    }
    return rays;
}

std::vector<PhotonRecord> trace(const Scene& scene, const std::vector<Ray2>& rays,
                                TraceStats* stats, TraceLog* log) {
    validate_scene(scene);
    Tracer tracer(scene);
    tracer.log = log;
    tracer.run(rays);
    if (stats) *stats = tracer.stats;
    return std::move(tracer.records);
}

Reading synthesize_reading(const std::vector<PhotonRecord>& records) {
    Reading reading;
    reading.records = records;
    double weighted_path = 0.0;
    for (const auto& r : records) {
        reading.intensity += r.power;
        weighted_path += r.power * r.optical_path;
        if (r.tag == RecordTag::BoundaryCrosstalk) reading.crosstalk += r.power;
    }
    if (!records.empty() && reading.intensity > 0.0) {
        reading.range = 0.5 * weighted_path / reading.intensity;
        reading.range_valid = true;
    } else {
        reading.range = std::numeric_limits<double>::quiet_NaN();
        reading.range_valid = false;
    }
    return reading;
}

Reading simulate(const Scene& scene, TraceStats* stats, TraceLog* log) {
    auto fan = emit_fan(scene.head, scene.boundary.has_value(),
                        scene.elastomer.refractive_index);
    auto records = trace(scene, fan, stats, log);
    return synthesize_reading(records);
}

double analytic_view_area(double separation, double cone_radius) {
    if (separation <= 0.0) throw std::invalid_argument("analytic_view_area: separation <= 0");
    if (cone_radius <= 0.0) throw std::invalid_argument("analytic_view_area: radius <= 0");
    if (separation >= 2.0 * cone_radius) return 0.0;
    return 0.5 * separation *
           std::sqrt(4.0 * cone_radius * cone_radius - separation * separation);
}

double analytic_intensity(double distance, double kappa, double zeta, double chi) {
    if (distance <= 0.0) throw std::invalid_argument("analytic_intensity: distance <= 0");
    double radicand = distance * distance - zeta * zeta;
    if (radicand <= 0.0) return chi;
    return kappa * std::sqrt(radicand) / (distance * distance) + chi;
}

}  // namespace pcf
