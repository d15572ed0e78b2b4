#include <cmath>
#include <sstream>

#include "doctest.h"
#include "pcf/config.hpp"

using namespace pcf;

TEST_CASE("auto fields resolve against the boundary kind") {
    ExperimentConfig c;
    CHECK(c.resolved_thickness() == doctest::Approx(17.75));
    CHECK(c.resolved_arc_radius() == doctest::Approx(17.75));
    CHECK(c.resolved_arc_apex_x() == doctest::Approx(-1.5));

    c.boundary_kind = "blocker";
    CHECK(c.resolved_thickness() == doctest::Approx(23.5));
    CHECK(c.resolved_blocker_height() == doctest::Approx(17.5));
    CHECK(c.resolved_blocker_x() == doctest::Approx(0.75));

    c.thickness = 20.0;
    CHECK(c.resolved_thickness() == doctest::Approx(20.0));
    CHECK(c.resolved_blocker_height() == doctest::Approx(14.0));
}

TEST_CASE("default configuration validates and builds scenes") {
    ExperimentConfig c;
    validate_config(c);

    Scene scene = make_scene(c);
    REQUIRE(scene.boundary.has_value());
    CHECK(scene.boundary->kind == BoundaryKind::Arc);
    CHECK(scene.boundary->arc_radius == doctest::Approx(17.75));
    CHECK(scene.head.half_fov == doctest::Approx(12.5 * M_PI / 180.0));
    CHECK(!scene.target.has_value());

    Scene bare = make_scene(c, "none");
    CHECK(!bare.boundary.has_value());

    // A kind override re-resolves auto fields for that kind.
    auto blocker = make_boundary_config(c, "blocker");
    REQUIRE(blocker.has_value());
    CHECK(blocker->thickness == doctest::Approx(23.5));
    CHECK(blocker->blocker_height == doctest::Approx(17.5));
}

TEST_CASE("config round trips through its text form") {
    ExperimentConfig original;
    original.fan_size = 91;
    original.arc_radius = 19.0;
    original.reflectivities = {0.2, 0.6};
    original.mc_scatter = true;
    original.mc_seed = 123456789;

    std::stringstream stream;
    write_config(stream, original);
    ExperimentConfig loaded = parse_config(stream);

    CHECK(loaded.fan_size == 91);
    CHECK(loaded.arc_radius == doctest::Approx(19.0));
    CHECK(is_auto(loaded.thickness));  // auto survives the round trip
    CHECK(is_auto(loaded.blocker_x));
    REQUIRE(loaded.reflectivities.size() == 2);
    CHECK(loaded.reflectivities[1] == doctest::Approx(0.6));
    CHECK(loaded.mc_scatter);
    CHECK(loaded.mc_seed == 123456789);
    CHECK(loaded.emitter_x == doctest::Approx(-1.5));
    CHECK(loaded.press_step == doctest::Approx(0.25));
}

TEST_CASE("parser accepts comments, blank lines and whitespace") {
    std::stringstream in(
        "# full-line comment\n"
        "[boundary]\n"
        "  kind = flat  ; trailing comment\n"
        "  thickness = 20  # millimetres\n"
        "\n"
        "[head]\n"
        "fan_size=61\n");
    ExperimentConfig c = parse_config(in);
    CHECK(c.boundary_kind == "flat");
    CHECK(c.thickness == doctest::Approx(20.0));
    CHECK(c.fan_size == 61);
}

TEST_CASE("parser reports malformed input with the line number") {
    auto expect_error = [](const char* text, const char* fragment) {
        std::stringstream in(text);
        try {
            parse_config(in);
            FAIL_CHECK("expected a parse error for: " << text);
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
        }
    };
    expect_error("[boundary]\nnope=1\n", "unknown key");
    expect_error("kind=arc\n", "outside any section");
    expect_error("[boundary\nkind=arc\n", "unterminated");
    expect_error("[boundary]\nthickness=abc\n", "expected a number");
    expect_error("[head]\nfan_size=10.5\n", "trailing junk");
    expect_error("[boundary]\nthickness\n", "expected key=value");
}

TEST_CASE("validation rejects out-of-range values") {
    ExperimentConfig c;
    c.span = -1.0;
    CHECK_THROWS(validate_config(c));

    c = ExperimentConfig{};
    c.press_max = 30.0;  // beyond the pad thickness
    CHECK_THROWS(validate_config(c));

    c = ExperimentConfig{};
    c.boundary_kind = "sphere";
    CHECK_THROWS(validate_config(c));

    c = ExperimentConfig{};
    c.reflectivities = {0.5, 1.5};
    CHECK_THROWS(validate_config(c));

    c = ExperimentConfig{};
    c.target_reflectivity = -0.2;
    CHECK_THROWS(validate_config(c));
}
