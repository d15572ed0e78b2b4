#include <cmath>
#include <optional>
#include <random>

#include "doctest.h"
#include "pcf/geometry.hpp"

using namespace pcf;

namespace {

// Independent segment oracle: direct Cramer solve in extended precision.
std::optional<double> segment_oracle(const Point2& o, const Vec2& d, const Segment2& seg,
                                     bool& borderline) {
    long double ex = seg.b.x - seg.a.x;
    long double ey = seg.b.y - seg.a.y;
    long double denom = (long double)d.x * ey - (long double)d.y * ex;
    borderline = std::abs((double)denom) < 1e-12;
    if (borderline) return std::nullopt;
    long double aox = seg.a.x - o.x;
    long double aoy = seg.a.y - o.y;
    long double t = (aox * ey - aoy * ex) / denom;
    long double u = (aox * (long double)d.y - aoy * (long double)d.x) / denom;
    borderline = std::abs((double)t) < 1e-6 || std::abs((double)u) < 1e-6 ||
                 std::abs((double)u - 1.0) < 1e-6;
    if (t <= 0.0L || u < 0.0L || u > 1.0L) return std::nullopt;
    return (double)t;
}

// Independent arc oracle: scan the arc for crossings of the ray's support
// line, refine each by bisection, keep the nearest one in front.
std::optional<double> arc_oracle(const Point2& o, const Vec2& d, const Arc2& arc) {
    auto f = [&](double th) {
        Point2 p = arc.point_at(th);
        return cross(p - o, d);
    };
    const int n = 20000;
    std::optional<double> best;
    double prev_th = arc.start_angle;
    double prev_f = f(prev_th);
    for (int i = 1; i <= n; ++i) {
        double th = arc.start_angle + arc.span * i / n;
        double fi = f(th);
        if (prev_f == 0.0 || prev_f * fi < 0.0) {
            double lo = prev_th, hi = th;
            double flo = prev_f;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                double fm = f(mid);
                if (flo * fm <= 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            double th_star = 0.5 * (lo + hi);
            Point2 p = arc.point_at(th_star);
            double t = dot(p - o, d);  // d is unit
            if (t > 2e-9 && (!best || t < *best)) best = t;
        }
        prev_th = th;
        prev_f = fi;
    }
    return best;
}

double tangency_margin(const Point2& o, const Vec2& d, const Arc2& arc) {
    Vec2 oc = o - arc.center;
    double b = dot(d, oc);
    double c = dot(oc, oc) - arc.radius * arc.radius;
    return std::abs(b * b - c);
}

bool near_arc_endpoint(const Point2& p, const Arc2& arc) {
    double angle = std::atan2(p.y - arc.center.y, p.x - arc.center.x);
    double twopi = 2.0 * M_PI;
    double rel = std::fmod(angle - arc.start_angle, twopi);
    if (rel < 0.0) rel += twopi;
    double to_start = std::min(rel, twopi - rel);
    double to_end = std::abs(rel - arc.span);
    return std::min(to_start, to_end) < 1e-4;
}

}  // namespace

TEST_CASE("segment intersection, frozen straight-up case") {
    auto hit = intersect_ray_segment({0, 0}, {0, 1}, {{-1, 5}, {1, 5}});
    REQUIRE(hit.has_value());
    CHECK(hit->t == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(hit->point.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(hit->point.y == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(hit->normal.x == doctest::Approx(0.0));
    CHECK(hit->normal.y == doctest::Approx(-1.0));
}

TEST_CASE("segment intersection rejects parallel, behind and off-end rays") {
    CHECK(!intersect_ray_segment({0, 0}, {1, 0}, {{-1, 5}, {1, 5}}));
    CHECK(!intersect_ray_segment({0, 10}, {0, 1}, {{-1, 5}, {1, 5}}));
    CHECK(!intersect_ray_segment({5, 0}, {0, 1}, {{-1, 5}, {1, 5}}));
}

TEST_CASE("segment self-hit guard ignores the surface the ray starts on") {
    auto hit = intersect_ray_segment({0.25, 5.0}, {0, 1}, {{-1, 5}, {1, 5}});
    CHECK(!hit.has_value());
}

TEST_CASE("arc intersection, frozen cases") {
    Arc2 upper{{0, 0}, 2.0, 0.0, M_PI};

    auto hit = intersect_ray_arc({0, 0}, {0, 1}, upper);
    REQUIRE(hit.has_value());
    CHECK(hit->t == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(hit->normal.y == doctest::Approx(-1.0));

    // The lower crossing is outside the angular span, so the ray passes
    // through to the far side.
    auto through = intersect_ray_arc({0, -5}, {0, 1}, upper);
    REQUIRE(through.has_value());
    CHECK(through->t == doctest::Approx(7.0).epsilon(1e-12));

    // From a point on the circle heading across it.
    auto across = intersect_ray_arc({2, 0}, {-1, 0}, upper);
    REQUIRE(across.has_value());
    CHECK(across->t == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("arc tangential graze counts as a miss") {
    Arc2 upper{{0, 0}, 2.0, 0.0, M_PI};
    CHECK(!intersect_ray_arc({-10, 2}, {1, 0}, upper));
}

TEST_CASE("arc angular span wraps across the x axis") {
    Arc2 wrap{{0, 0}, 1.0, -0.5, 1.0};  // from -0.5 to +0.5 radians
    auto hit = intersect_ray_arc({-5, 0}, {1, 0}, wrap);
    REQUIRE(hit.has_value());
    CHECK(hit->t == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(!intersect_ray_arc({0, 5}, {0, -1}, wrap));
}

TEST_CASE("segment intersections agree with an independent solver") {
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        Segment2 seg{{coord(rng), coord(rng)}, {coord(rng), coord(rng)}};
        Point2 o{coord(rng), coord(rng)};
        double a = angle(rng);
        Vec2 d{std::cos(a), std::sin(a)};
        bool borderline = false;
        auto expected = segment_oracle(o, d, seg, borderline);
        if (borderline) continue;
        auto got = intersect_ray_segment(o, d, seg);
        ++checked;
        REQUIRE(got.has_value() == expected.has_value());
        if (got) {
            CHECK(got->t == doctest::Approx(*expected).epsilon(1e-9));
            CHECK(std::abs(dot(got->normal, d)) <= 1.0);
            CHECK(dot(got->normal, d) <= 0.0);
            CHECK(norm(got->normal) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    CHECK(checked > 500);
}

TEST_CASE("arc intersections agree with an independent scan") {
    std::mt19937 rng(20240812);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    std::uniform_real_distribution<double> radius(0.5, 8.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> span(0.3, 5.5);
    int checked = 0;
    for (int i = 0; i < 600; ++i) {
        Arc2 arc{{coord(rng), coord(rng)}, radius(rng), angle(rng), span(rng)};
        Point2 o{2.0 * coord(rng), 2.0 * coord(rng)};
        double a = angle(rng);
        Vec2 d{std::cos(a), std::sin(a)};

        if (tangency_margin(o, d, arc) < 1e-6) continue;
        auto expected = arc_oracle(o, d, arc);
        auto got = intersect_ray_arc(o, d, arc);
        if (expected && near_arc_endpoint(o + *expected * d, arc)) continue;
        if (got && near_arc_endpoint(got->point, arc)) continue;
        ++checked;
        REQUIRE(got.has_value() == expected.has_value());
        if (got) {
            CHECK(got->t == doctest::Approx(*expected).epsilon(1e-6));
            double off_circle = std::abs(norm(got->point - arc.center) - arc.radius);
            CHECK(off_circle < 1e-9);
            CHECK(dot(got->normal, d) <= 0.0);
            CHECK(norm(got->normal) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    CHECK(checked > 200);
}
