#include <sstream>

#include "doctest.h"
#include "pcf/svg.hpp"
#include "pcf/sweeps.hpp"

using namespace pcf;

namespace {

// Trimmed-down configuration keeping the simulation cheap in unit tests.
ExperimentConfig light_config() {
    ExperimentConfig c;
    c.fan_size = 61;
    c.scatter_fan_size = 17;
    c.proximity_min = 2.0;
    c.proximity_max = 26.0;
    c.proximity_step = 3.0;
    c.force_grid_min = 0.25;
    c.force_grid_max = 4.75;
    c.force_grid_step = 0.25;
    c.press_step = 1.0;
    return c;
}

}  // namespace

TEST_CASE("proximity sweep covers the configured grid above the surface") {
    ExperimentConfig c = light_config();
    auto rows = run_proximity_sweep(c, "arc", 0.5);
    REQUIRE(rows.size() == 9);
    CHECK(rows.front().distance == doctest::Approx(17.75 + 2.0));
    CHECK(rows.back().distance == doctest::Approx(17.75 + 26.0));
    for (const auto& row : rows) {
        CHECK(row.kind == "arc");
        CHECK(row.depth == 0.0);
        CHECK(row.force == 0.0);
        CHECK(row.reading.intensity >= 0.0);
    }
}

TEST_CASE("force sweep spans kinds and depths with spring forces attached") {
    ExperimentConfig c = light_config();
    auto rows = run_force_sweep(c, {"flat", "arc"}, {0.5});
    REQUIRE(rows.size() == 2 * 5);
    CHECK(rows[0].kind == "flat");
    CHECK(rows[5].kind == "arc");
    CHECK(rows[0].depth == doctest::Approx(0.25));
    CHECK(rows[0].force == doctest::Approx(0.5));
    CHECK(rows[4].depth == doctest::Approx(4.25));
    CHECK(rows[0].distance == doctest::Approx(17.75 - 0.25));
}

TEST_CASE("force sweep supports a resting-target row at zero depth") {
    ExperimentConfig c = light_config();
    c.press_min = 0.0;
    c.press_max = 1.0;
    c.press_step = 1.0;
    validate_config(c);
    auto rows = run_force_sweep(c, {"arc"}, {0.5});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].depth == 0.0);
    CHECK(rows[0].force == 0.0);
    CHECK(rows[0].distance == doctest::Approx(17.75));
    CHECK(rows[1].force == doctest::Approx(2.0));
}

TEST_CASE("proximity matrix crosses configurations with reflectivities") {
    ExperimentConfig c = light_config();
    c.reflectivities = {0.2, 0.8};
    auto rows = run_proximity_matrix(c);
    REQUIRE(rows.size() == 4 * 2 * 9);
    CHECK(rows.front().kind == "none");
    CHECK(rows.back().kind == "arc");
    CHECK(rows[0].reflectivity == doctest::Approx(0.2));
    CHECK(rows[9].reflectivity == doctest::Approx(0.8));
}

TEST_CASE("free-space targets may not sit inside the boundary") {
    ExperimentConfig c = light_config();
    CHECK_THROWS(scene_for_distance(c, "arc", 10.0, 0.5));
    CHECK_THROWS(scene_for_press(c, "none", 1.0, 0.5));
}

TEST_CASE("CSV output is schema-stable and byte-deterministic") {
    ExperimentConfig c = light_config();
    auto rows = run_proximity_sweep(c, "arc", 0.5);

    std::ostringstream first, second;
    write_csv(first, rows);
    write_csv(second, run_proximity_sweep(c, "arc", 0.5));
    CHECK(first.str() == second.str());

    std::istringstream lines(first.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header == "config_kind,d_mm,rho,delta_mm,force_N,range_mm,intensity,crosstalk");
    std::string row;
    int count = 0;
    while (std::getline(lines, row)) {
        ++count;
        int commas = 0;
        for (char ch : row) commas += ch == ',';
        CHECK(commas == 7);
    }
    CHECK(count == 9);
}

TEST_CASE("ray diagrams are deterministic well-formed SVG") {
    ExperimentConfig c = light_config();
    Scene scene = scene_for_press(c, "arc", 1.0, 0.5);
    TraceLog log;
    simulate(scene, nullptr, &log);
    CHECK(!log.segments.empty());

    std::string svg = render_ray_diagram(scene, log);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);  // the arc boundary
    CHECK(svg.find("circle") != std::string::npos);     // emitter and receiver

    TraceLog log2;
    simulate(scene, nullptr, &log2);
    CHECK(render_ray_diagram(scene, log2) == svg);
}

TEST_CASE("pipeline produces fits and a force table on a light configuration") {
    ExperimentConfig c = light_config();
    std::ostringstream report;
    PipelineOutcome outcome = run_full_pipeline(c, &report);
    CHECK(outcome.fits.size() == c.reflectivities.size());
    CHECK(!outcome.force_table.empty());
    CHECK(report.str().find("calibrate:") != std::string::npos);
    CHECK(report.str().find("pipeline:") != std::string::npos);
}
