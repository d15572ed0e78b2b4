#pragma once

#include <string>

#include "pcf/sensor.hpp"

namespace pcf {

struct DiagramOptions {
    double pixels_per_mm = 20.0;
    bool grid = true;  ///< light 1 mm reference grid
};

/// Renders the scene and a trace log as a standalone SVG document. Millimetre
/// coordinates are preserved inside a y-up group; ray opacity follows power.
std::string render_ray_diagram(const Scene& scene, const TraceLog& log,
                               const DiagramOptions& options = {});

}  // namespace pcf
