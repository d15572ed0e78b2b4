#include "pcf/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pcf/elastomer.hpp"

namespace pcf {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

void line(std::ostringstream& out, Point2 a, Point2 b, const char* style) {
    out << "<line x1=\"" << num(a.x) << "\" y1=\"" << num(a.y) << "\" x2=\"" << num(b.x)
        << "\" y2=\"" << num(b.y) << "\" " << style << "/>\n";
}

void arc_polyline(std::ostringstream& out, const Arc2& arc, const char* style) {
    out << "<polyline fill=\"none\" " << style << " points=\"";
    int steps = std::max(2, static_cast<int>(std::ceil(std::abs(arc.span) / 0.00873)));
    for (int i = 0; i <= steps; ++i) {
        Point2 p = arc.point_at(arc.start_angle + arc.span * i / steps);
        if (i) out << " ";
        out << num(p.x) << "," << num(p.y);
    }
    out << "\"/>\n";
}

}  // namespace

std::string render_ray_diagram(const Scene& scene, const TraceLog& log,
                               const DiagramOptions& options) {
    double xmax = scene.boundary ? 0.5 * scene.boundary->span + 2.0 : 8.0;
    double ymax = 20.0;
    if (scene.boundary) ymax = std::max(ymax, scene.boundary->thickness + 3.0);
    if (scene.target) ymax = std::max(ymax, scene.target->distance + 3.0);
    double ymin = -2.0;

    double s = options.pixels_per_mm;
    double width = 2.0 * xmax * s;
    double height = (ymax - ymin) * s;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
        << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width) << " "
        << num(height) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // Flip into y-up millimetre coordinates.
    out << "<g transform=\"translate(" << num(xmax * s) << "," << num(ymax * s) << ") scale("
        << num(s) << "," << num(-s) << ")\">\n";

    if (options.grid) {
        out << "<g stroke=\"#e0e0e0\" stroke-width=\"0.02\">\n";
        for (double x = std::ceil(-xmax); x <= xmax; x += 1.0)
            line(out, {x, ymin}, {x, ymax}, "");
        for (double y = std::ceil(ymin); y <= ymax; y += 1.0)
            line(out, {-xmax, y}, {xmax, y}, "");
        out << "</g>\n";
    }

    double max_power = 0.0;
    for (const auto& seg : log.segments) max_power = std::max(max_power, seg.power);
    if (max_power <= 0.0) max_power = 1.0;
    out << "<g stroke=\"#e67e22\" stroke-width=\"0.03\" stroke-linecap=\"round\">\n";
    for (const auto& seg : log.segments) {
        // Proportional to carried power, floored so faint branches stay visible.
        double opacity = std::max(seg.power / max_power, 0.08);
        char style[64];
        std::snprintf(style, sizeof style, "stroke-opacity=\"%.3f\"", opacity);
        line(out, seg.from, seg.to, style);
    }
    out << "</g>\n";

    double plane_half = scene.boundary ? 0.5 * scene.boundary->span : 6.0;
    line(out, {-plane_half, 0.0}, {plane_half, 0.0},
         "stroke=\"#404040\" stroke-width=\"0.12\"");

    if (scene.boundary) {
        Boundary boundary = build_boundary(*scene.boundary, scene.indentation);
        for (const auto& piece : boundary.pieces) {
            const char* style = piece.surface == SurfaceClass::Blocker
                                    ? "stroke=\"#8b4513\" stroke-width=\"0.18\""
                                    : "stroke=\"#000000\" stroke-width=\"0.1\"";
            if (const auto* seg = std::get_if<Segment2>(&piece.shape))
                line(out, seg->a, seg->b, style);
            else
                arc_polyline(out, std::get<Arc2>(piece.shape), style);
        }
    }

    if (scene.target) {
        double half = std::min(scene.target->half_width, xmax - 0.5);
        line(out, {-half, scene.target->distance}, {half, scene.target->distance},
             "stroke=\"#2e8b57\" stroke-width=\"0.15\"");
    }

    const SensorHead& head = scene.head;
    out << "<circle cx=\"" << num(head.emitter.x)
        << "\" cy=\"0\" r=\"0.25\" fill=\"#d62728\"/>\n";
    out << "<circle cx=\"" << num(head.receiver.x)
        << "\" cy=\"0\" r=\"0.25\" fill=\"#1f77b4\"/>\n";
    line(out, {head.receiver.x - head.aperture_half_width, -0.4},
         {head.receiver.x + head.aperture_half_width, -0.4},
         "stroke=\"#1f77b4\" stroke-width=\"0.15\"");

    out << "</g>\n</svg>\n";
    return out.str();
}

}  // namespace pcf
