#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "pcf/optimizer.hpp"

using namespace pcf;

namespace {

Scene arc_prototype(double thickness = 17.75) {
    Scene scene;
    BoundaryConfig b;
    b.kind = BoundaryKind::Arc;
    b.thickness = thickness;
    b.arc_radius = thickness;
    b.arc_apex_x = scene.head.emitter.x;
    scene.boundary = b;
    return scene;
}

}  // namespace

TEST_CASE("focused arc has zero boundary crosstalk") {
    CHECK(arc_crosstalk(arc_prototype(), 17.75, 17.75) == 0.0);
}

TEST_CASE("sensitivity proxy is non-negative and needs two depths") {
    Scene prototype = arc_prototype();
    CHECK(arc_sensitivity(prototype, 17.75, 17.75, 0.5, {1.0}) == 0.0);
    double s = arc_sensitivity(prototype, 17.75, 17.75, 0.5, {1.0, 3.0});
    CHECK(s >= 0.0);
    CHECK_THROWS(arc_sensitivity(prototype, 17.75, 17.75, 0.5, {1.0, 20.0}));
}

TEST_CASE("degenerate box evaluates exactly once") {
    OptimBox box{15.0, 15.0, 17.75, 17.75};
    OptimizerOptions options;
    OptimResult result = optimize_arc(arc_prototype(), box, {1.0, 0.0}, options);
    CHECK(result.radius == doctest::Approx(15.0));
    CHECK(result.thickness == doctest::Approx(17.75));
    CHECK(result.evaluations == 1);
    CHECK(result.objective == result.crosstalk);
}

TEST_CASE("result objective is the minimum over the evaluation trace") {
    OptimBox box{12.0, 22.0, 17.75, 17.75};
    OptimizerOptions options;
    options.grid_points = 5;
    options.sweeps = 1;
    OptimResult result = optimize_arc(arc_prototype(), box, {1.0, 0.0}, options);
    REQUIRE(!result.trace.empty());
    CHECK(int(result.trace.size()) == result.evaluations);
    double lowest = result.trace.front().objective;
    for (const auto& e : result.trace) lowest = std::min(lowest, e.objective);
    CHECK(result.objective == lowest);
}

TEST_CASE("radius search keeps the smallest radius among equal objectives") {
    OptimBox box{10.0, 30.0, 17.75, 17.75};
    OptimizerOptions options;
    options.grid_points = 5;
    options.sweeps = 1;
    OptimResult result = optimize_arc(arc_prototype(), box, {1.0, 0.0}, options);

    // Whatever the landscape, no coarser grid point may beat the result, and
    // among grid points with the same objective the smallest radius wins.
    double best = result.objective;
    for (int i = 0; i < 5; ++i) {
        double radius = 10.0 + 20.0 * i / 4.0;
        double value = arc_crosstalk(arc_prototype(), radius, 17.75);
        CHECK(value >= best - 1e-15);
        if (value == best) CHECK(result.radius <= radius + 1e-12);
    }
}

TEST_CASE("optimizer rejects malformed problems") {
    OptimizerOptions options;
    CHECK_THROWS(optimize_arc(arc_prototype(), {0.0, 10.0, 17.75, 17.75}, {1.0, 0.0}, options));
    CHECK_THROWS(optimize_arc(arc_prototype(), {10.0, 5.0, 17.75, 17.75}, {1.0, 0.0}, options));
    options.grid_points = 1;
    CHECK_THROWS(
        optimize_arc(arc_prototype(), {10.0, 30.0, 17.75, 17.75}, {1.0, 0.0}, options));

    Scene flat;
    BoundaryConfig b;
    b.kind = BoundaryKind::Flat;
    flat.boundary = b;
    options.grid_points = 25;
    CHECK_THROWS(optimize_arc(flat, {10.0, 30.0, 17.75, 17.75}, {1.0, 0.0}, options));
}
