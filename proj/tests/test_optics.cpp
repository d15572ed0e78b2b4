#include <cmath>

#include "doctest.h"
#include "pcf/optics.hpp"

using namespace pcf;

TEST_CASE("reflection is specular, unit length and involutive") {
    double s = std::sqrt(0.5);
    Vec2 r = reflect({s, -s}, {0, 1});
    CHECK(r.x == doctest::Approx(s).epsilon(1e-15));
    CHECK(r.y == doctest::Approx(s).epsilon(1e-15));

    Vec2 d{0.6, -0.8};
    Vec2 n{0.0, 1.0};
    Vec2 twice = reflect(reflect(d, n), n);
    CHECK(twice.x == doctest::Approx(d.x).epsilon(1e-15));
    CHECK(twice.y == doctest::Approx(d.y).epsilon(1e-15));
    CHECK(norm(reflect(d, n)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("refraction obeys the sine law entering the dense medium") {
    // 30 degrees in air onto a horizontal interface, entering index 1.41.
    Vec2 d{std::sin(M_PI / 6.0), -std::cos(M_PI / 6.0)};
    auto t = refract(d, {0, 1}, 1.0, 1.41);
    REQUIRE(t.has_value());
    CHECK(norm(*t) == doctest::Approx(1.0).epsilon(1e-12));
    // Tangential component scales by n1/n2: sin(30 deg) / 1.41.
    CHECK(t->x == doctest::Approx(0.5 / 1.41).epsilon(1e-12));
    CHECK(t->y < 0.0);
    // Leaving the way it came reverses refraction.
    auto back = refract(-*t, {0, -1}, 1.41, 1.0);
    REQUIRE(back.has_value());
    CHECK(back->x == doctest::Approx(-d.x).epsilon(1e-12));
    CHECK(back->y == doctest::Approx(-d.y).epsilon(1e-12));
}

TEST_CASE("total internal reflection beyond the critical angle") {
    double critical = std::asin(1.0 / 1.41);
    double theta = critical + 0.01;
    Vec2 d{std::sin(theta), std::cos(theta)};  // inside, heading up and out
    CHECK(!refract(d, {0, -1}, 1.41, 1.0));
    auto split = fresnel_unpolarized(std::cos(theta), 1.41, 1.0);
    CHECK(split.reflectance == 1.0);
    CHECK(split.transmittance == 0.0);

    // Just inside the critical angle light still escapes.
    theta = critical - 0.01;
    Vec2 d2{std::sin(theta), std::cos(theta)};
    CHECK(refract(d2, {0, -1}, 1.41, 1.0).has_value());
    CHECK(fresnel_unpolarized(std::cos(theta), 1.41, 1.0).transmittance > 0.0);
}

TEST_CASE("normal-incidence reflectance matches the closed form") {
    double ratio = (1.0 - 1.41) / (1.0 + 1.41);
    auto split = fresnel_unpolarized(1.0, 1.0, 1.41);
    CHECK(split.reflectance == doctest::Approx(ratio * ratio).epsilon(1e-12));
    // Same from either side at normal incidence.
    auto reverse = fresnel_unpolarized(1.0, 1.41, 1.0);
    CHECK(reverse.reflectance == doctest::Approx(split.reflectance).epsilon(1e-12));
}

TEST_CASE("Fresnel split conserves energy and approaches 1 at grazing") {
    for (int i = 0; i <= 100; ++i) {
        double cosi = i / 100.0;
        auto split = fresnel_unpolarized(cosi, 1.0, 1.41);
        CHECK(split.reflectance >= 0.0);
        CHECK(split.reflectance <= 1.0);
        CHECK(split.reflectance + split.transmittance == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(fresnel_unpolarized(1e-9, 1.0, 1.41).reflectance ==
          doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("stratified scatter fan: weights, directions and symmetry") {
    auto fan = lambertian_scatter({1, 2}, {0, 1}, 0.4, 0.5, 64);
    REQUIRE(fan.size() == 64);
    double total = 0.0;
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& ray : fan) {
        total += ray.power;
        CHECK(ray.power == doctest::Approx(0.4 * 0.5 / 64).epsilon(1e-15));
        CHECK(norm(ray.direction) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(dot(ray.direction, Vec2{0, 1}) > 0.0);
        CHECK(ray.origin.x == 1.0);
        CHECK(ray.origin.y == 2.0);
        mean_x += ray.direction.x;
        mean_y += ray.direction.y;
    }
    CHECK(total == doctest::Approx(0.4 * 0.5).epsilon(1e-14));
    // Normalized mean direction points along the surface normal.
    double mean_norm = std::sqrt(mean_x * mean_x + mean_y * mean_y);
    CHECK(std::abs(mean_x / mean_norm) < 1e-3);
    CHECK(mean_y / mean_norm == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("stratified scatter fan: frozen four-ray strata") {
    auto fan = lambertian_scatter({0, 0}, {0, -1}, 1.0, 1.0, 4);
    REQUIRE(fan.size() == 4);
    // sin(angle) strata midpoints: -0.75, -0.25, 0.25, 0.75 about (0, -1);
    // the tangent of (0,-1) is (1,0) so direction = (sin, -cos).
    double sines[4] = {-0.75, -0.25, 0.25, 0.75};
    for (int j = 0; j < 4; ++j) {
        CHECK(fan[j].direction.x == doctest::Approx(sines[j]).epsilon(1e-15));
        CHECK(fan[j].direction.y ==
              doctest::Approx(-std::sqrt(1.0 - sines[j] * sines[j])).epsilon(1e-15));
    }
}

TEST_CASE("scatter fan is empty when nothing reflects") {
    CHECK(lambertian_scatter({0, 0}, {0, 1}, 0.0, 0.5, 8).empty());
    CHECK(lambertian_scatter({0, 0}, {0, 1}, 1.0, 0.0, 8).empty());
    CHECK_THROWS(lambertian_scatter({0, 0}, {0, 1}, 1.0, 0.5, 0));
    CHECK_THROWS(lambertian_scatter({0, 0}, {0, 1}, 1.0, 1.5, 8));
}

TEST_CASE("Monte Carlo scatter is seed-deterministic and conserves power") {
    auto a = lambertian_scatter_mc({0, 0}, {0, 1}, 1.0, 0.8, 256, 42);
    auto b = lambertian_scatter_mc({0, 0}, {0, 1}, 1.0, 0.8, 256, 42);
    auto c = lambertian_scatter_mc({0, 0}, {0, 1}, 1.0, 0.8, 256, 43);
    REQUIRE(a.size() == 256);
    REQUIRE(b.size() == 256);
    bool identical = true;
    bool differs_from_c = false;
    double total = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        identical = identical && a[i].direction.x == b[i].direction.x &&
                    a[i].direction.y == b[i].direction.y;
        differs_from_c = differs_from_c || a[i].direction.x != c[i].direction.x;
        total += a[i].power;
        CHECK(dot(a[i].direction, Vec2{0, 1}) > 0.0);
    }
    CHECK(identical);
    CHECK(differs_from_c);
    CHECK(total == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("refraction and Fresnel reject invalid inputs") {
    CHECK_THROWS(refract({0, -1}, {0, 1}, -1.0, 1.41));
    CHECK_THROWS(fresnel_unpolarized(0.5, 0.0, 1.41));
    CHECK_THROWS(fresnel_unpolarized(-0.2, 1.0, 1.41));
    CHECK_THROWS(fresnel_unpolarized(1.1, 1.0, 1.41));
}
