#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pcf/geometry.hpp"

namespace pcf {

struct Medium {
    double refractive_index = 1.0;
};

/// A traced light branch. power is the fraction of total emitted power the
/// branch carries; optical_path accumulates geometric length times the
/// refractive index of the medium each leg was travelled in.
struct Ray2 {
    Point2 origin;
    Vec2 direction;            // unit length
    double power = 0.0;
    double optical_path = 0.0; // millimetres of equivalent path in vacuum
    int bounce_count = 0;
    double medium_index = 1.0; // index of the medium the ray travels in
    bool hit_target = false;   // true once any ancestor interaction was a target hit
};

/// Mirror reflection of direction d about unit normal n.
inline Vec2 reflect(const Vec2& d, const Vec2& n) {
    return d - 2.0 * dot(d, n) * n;
}

/// Snell refraction of unit direction d crossing into the medium with index
/// n2. n must be unit and oriented against d. Returns nothing under total
/// internal reflection.
std::optional<Vec2> refract(const Vec2& d, const Vec2& n, double n1, double n2);

struct FresnelSplit {
    double reflectance = 0.0;
    double transmittance = 0.0;
};

/// Unpolarized Fresnel power split for a dielectric interface.
/// cos_incident is the cosine of the incidence angle (positive). Under total
/// internal reflection reflectance is exactly 1.
FresnelSplit fresnel_unpolarized(double cos_incident, double n1, double n2);

/// Deterministic stratified cosine-law fan over the half plane on the normal's
/// side. Directions are the midpoints of fan_size equal strata of the cosine
/// measure, so every ray carries weight 1/fan_size and the weights sum to 1.
/// Each ray's power is incoming_power * reflectivity / fan_size. Returns an
/// empty fan when no power is reflected.
std::vector<Ray2> lambertian_scatter(const Point2& hit_point, const Vec2& surface_normal,
                                     double incoming_power, double reflectivity,
                                     int fan_size);

/// Monte Carlo variant used for convergence cross-checks: directions are drawn
/// from the cosine law with the given deterministic seed instead of stratified.
std::vector<Ray2> lambertian_scatter_mc(const Point2& hit_point, const Vec2& surface_normal,
                                        double incoming_power, double reflectivity,
                                        int fan_size, std::uint64_t seed);

}  // namespace pcf
