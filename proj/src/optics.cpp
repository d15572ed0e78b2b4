#include "pcf/optics.hpp"

#include <random>
#include <stdexcept>

namespace pcf {

std::optional<Vec2> refract(const Vec2& d, const Vec2& n, double n1, double n2) {
    if (n1 <= 0.0 || n2 <= 0.0) throw std::invalid_argument("refract: indices must be positive");
    double cos1 = -dot(d, n);
    double eta = n1 / n2;
    double sin2_sq = eta * eta * (1.0 - cos1 * cos1);
    if (sin2_sq > 1.0) return std::nullopt;  // total internal reflection
    double cos2 = std::sqrt(1.0 - sin2_sq);
    return eta * d + (eta * cos1 - cos2) * n;
}

FresnelSplit fresnel_unpolarized(double cos_incident, double n1, double n2) {
    if (n1 <= 0.0 || n2 <= 0.0)
        throw std::invalid_argument("fresnel_unpolarized: indices must be positive");
    if (cos_incident < 0.0 || cos_incident > 1.0 + 1e-12)
        throw std::invalid_argument("fresnel_unpolarized: cosine out of range");

    double cos1 = std::min(cos_incident, 1.0);
    double sin1_sq = 1.0 - cos1 * cos1;
    double eta = n1 / n2;
    double sin2_sq = eta * eta * sin1_sq;
    if (sin2_sq > 1.0) return {1.0, 0.0};  // total internal reflection

    double cos2 = std::sqrt(1.0 - sin2_sq);
    double rs = (n1 * cos1 - n2 * cos2) / (n1 * cos1 + n2 * cos2);
    double rp = (n1 * cos2 - n2 * cos1) / (n1 * cos2 + n2 * cos1);
    double r = 0.5 * (rs * rs + rp * rp);
    return {r, 1.0 - r};
}

namespace {

Ray2 scatter_ray(const Point2& origin, const Vec2& normal, double sin_a, double power) {
    double cos_a = std::sqrt(std::max(0.0, 1.0 - sin_a * sin_a));
    Vec2 tangent = perp(normal);
    Ray2 ray;
    ray.origin = origin;
    ray.direction = sin_a * tangent + cos_a * normal;
    ray.power = power;
    return ray;
}

}  // namespace

std::vector<Ray2> lambertian_scatter(const Point2& hit_point, const Vec2& surface_normal,
                                     double incoming_power, double reflectivity,
                                     int fan_size) {
    if (fan_size < 1) throw std::invalid_argument("lambertian_scatter: fan_size must be >= 1");
    if (reflectivity < 0.0 || reflectivity > 1.0)
        throw std::invalid_argument("lambertian_scatter: reflectivity outside [0,1]");

    double total = incoming_power * reflectivity;
    std::vector<Ray2> fan;
    if (total <= 0.0) return fan;

    fan.reserve(static_cast<size_t>(fan_size));
    double w = 1.0 / fan_size;
    for (int j = 0; j < fan_size; ++j) {
        // Midpoint of stratum j of the cosine measure: sin(angle) uniform.
        double sin_a = (2.0 * j + 1.0) / fan_size - 1.0;
        fan.push_back(scatter_ray(hit_point, surface_normal, sin_a, total * w));
    }
    return fan;
}

std::vector<Ray2> lambertian_scatter_mc(const Point2& hit_point, const Vec2& surface_normal,
                                        double incoming_power, double reflectivity,
                                        int fan_size, std::uint64_t seed) {
    if (fan_size < 1) throw std::invalid_argument("lambertian_scatter_mc: fan_size must be >= 1");
    if (reflectivity < 0.0 || reflectivity > 1.0)
        throw std::invalid_argument("lambertian_scatter_mc: reflectivity outside [0,1]");

    double total = incoming_power * reflectivity;
    std::vector<Ray2> fan;
    if (total <= 0.0) return fan;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    fan.reserve(static_cast<size_t>(fan_size));
    double w = 1.0 / fan_size;
    for (int j = 0; j < fan_size; ++j)
        fan.push_back(scatter_ray(hit_point, surface_normal, uni(rng), total * w));
    return fan;
}

}  // namespace pcf
