#include "pcf/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pcf {

namespace {

std::string trim(const std::string& s) {
    size_t begin = 0;
    size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

[[noreturn]] void fail_line(int line_no, const std::string& why) {
    throw std::runtime_error("config line " + std::to_string(line_no) + ": " + why);
}

double parse_double(const std::string& value, int line_no) {
    try {
        size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) fail_line(line_no, "trailing junk in number '" + value + "'");
        return v;
    } catch (const std::logic_error&) {
        fail_line(line_no, "expected a number, got '" + value + "'");
    }
}

double parse_double_or_auto(const std::string& value, int line_no) {
    if (value == "auto") return kAuto;
    return parse_double(value, line_no);
}

int parse_int(const std::string& value, int line_no) {
    try {
        size_t used = 0;
        int v = std::stoi(value, &used);
        if (used != value.size()) fail_line(line_no, "trailing junk in integer '" + value + "'");
        return v;
    } catch (const std::logic_error&) {
        fail_line(line_no, "expected an integer, got '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& value, int line_no) {
    try {
        size_t used = 0;
        std::uint64_t v = std::stoull(value, &used);
        if (used != value.size()) fail_line(line_no, "trailing junk in integer '" + value + "'");
        return v;
    } catch (const std::logic_error&) {
        fail_line(line_no, "expected an unsigned integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& value, int line_no) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    fail_line(line_no, "expected a boolean, got '" + value + "'");
}

std::vector<double> parse_double_list(const std::string& value, int line_no) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) fail_line(line_no, "empty element in list");
        out.push_back(parse_double(item, line_no));
    }
    if (out.empty()) fail_line(line_no, "empty list");
    return out;
}

std::string format_double(double v) {
    if (is_auto(v)) return "auto";
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

std::string format_list(const std::vector<double>& values) {
    std::ostringstream out;
    out << std::setprecision(17);
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out << ",";
        out << values[i];
    }
    return out.str();
}

void check(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(std::string("config: ") + message);
}

}  // namespace

double ExperimentConfig::resolved_thickness() const {
    if (!is_auto(thickness)) return thickness;
    return boundary_kind == "blocker" ? 23.5 : 17.75;
}

double ExperimentConfig::resolved_arc_radius() const {
    return is_auto(arc_radius) ? resolved_thickness() : arc_radius;
}

double ExperimentConfig::resolved_arc_apex_x() const {
    return is_auto(arc_apex_x) ? emitter_x : arc_apex_x;
}

double ExperimentConfig::resolved_blocker_height() const {
    return is_auto(blocker_height) ? resolved_thickness() - 6.0 : blocker_height;
}

double ExperimentConfig::resolved_blocker_x() const {
    return is_auto(blocker_x) ? 0.75 : blocker_x;
}

double ExperimentConfig::resolved_opt_thickness_min() const {
    return is_auto(opt_thickness_min) ? resolved_thickness() : opt_thickness_min;
}

double ExperimentConfig::resolved_opt_thickness_max() const {
    return is_auto(opt_thickness_max) ? resolved_thickness() : opt_thickness_max;
}

void validate_config(const ExperimentConfig& c) {
    check(c.receiver_x > c.emitter_x, "receiver_x must exceed emitter_x");
    check(c.half_fov_deg > 0.0 && c.half_fov_deg < 90.0, "half_fov_deg outside (0, 90)");
    check(c.fan_size >= 3, "fan_size must be >= 3");
    check(c.scatter_fan_size >= 1, "scatter_fan_size must be >= 1");
    check(c.aperture_half_width > 0.0, "aperture_half_width must be positive");
    check(c.air_index > 0.0 && c.elastomer_index > 0.0, "refractive indices must be positive");
    check(c.boundary_kind == "arc" || c.boundary_kind == "flat" ||
              c.boundary_kind == "blocker" || c.boundary_kind == "none",
          "boundary kind must be arc, flat, blocker or none");
    check(c.resolved_thickness() > 0.0, "thickness must be positive");
    check(c.span > 0.0, "span must be positive");
    check(c.resolved_arc_radius() > 0.0, "arc_radius must be positive");
    if (c.boundary_kind == "blocker") {
        check(c.resolved_blocker_height() > 0.0 &&
                  c.resolved_blocker_height() < c.resolved_thickness(),
              "blocker_height outside (0, thickness)");
        check(std::abs(c.resolved_blocker_x()) <= 0.5 * c.span, "blocker_x outside the span");
    }
    check(c.target_distance > 0.0, "target_distance must be positive");
    check(c.target_reflectivity >= 0.0 && c.target_reflectivity <= 1.0,
          "target_reflectivity outside [0, 1]");
    check(c.target_half_width > 0.0, "target_half_width must be positive");
    check(c.spring_stiffness > 0.0, "spring_stiffness must be positive");
    check(c.spring_max_force > 0.0, "spring_max_force must be positive");
    check(c.power_floor > 0.0, "power_floor must be positive");
    check(c.bounce_cap >= 1, "bounce_cap must be >= 1");
    check(c.proximity_step > 0.0 && c.proximity_max >= c.proximity_min,
          "proximity sweep bounds invalid");
    check(c.press_min >= 0.0 && c.press_step > 0.0 && c.press_max >= c.press_min,
          "force sweep bounds invalid");
    check(c.press_max < c.resolved_thickness(), "press_max must stay below thickness");
    check(!c.reflectivities.empty(), "reflectivities must be non-empty");
    for (double r : c.reflectivities)
        check(r >= 0.0 && r <= 1.0, "reflectivities must lie in [0, 1]");
    check(c.contact_drop > 0.0, "contact_drop must be positive");
    check(c.force_grid_min > 0.0 && c.force_grid_step > 0.0 &&
              c.force_grid_max >= c.force_grid_min,
          "force grid bounds invalid");
    check(c.force_grid_max < c.resolved_thickness(),
          "force_grid_max must stay below thickness");
    check(c.radius_min > 0.0 && c.radius_max >= c.radius_min, "radius bounds invalid");
    check(c.resolved_opt_thickness_min() > 0.0 &&
              c.resolved_opt_thickness_max() >= c.resolved_opt_thickness_min(),
          "optimizer thickness bounds invalid");
    check(c.grid_points >= 2, "grid_points must be >= 2");
    check(c.refine_sweeps >= 0, "refine_sweeps must be >= 0");
}

SensorHead make_head(const ExperimentConfig& c) {
    SensorHead head;
    head.emitter = {c.emitter_x, 0.0};
    head.receiver = {c.receiver_x, 0.0};
    head.half_fov = c.half_fov_deg * M_PI / 180.0;
    head.fan_size = c.fan_size;
    head.scatter_fan_size = c.scatter_fan_size;
    head.aperture_half_width = c.aperture_half_width;
    return head;
}

std::optional<BoundaryConfig> make_boundary_config(const ExperimentConfig& c,
                                                   const std::string& kind_arg) {
    std::string kind = kind_arg == "auto" ? c.boundary_kind : kind_arg;
    if (kind == "none") return std::nullopt;

    // Per-kind auto resolution keeps a kind override self-consistent even
    // when the base configuration names another kind.
    ExperimentConfig resolved = c;
    resolved.boundary_kind = kind;

    BoundaryConfig b;
    if (kind == "arc")
        b.kind = BoundaryKind::Arc;
    else if (kind == "flat")
        b.kind = BoundaryKind::Flat;
    else if (kind == "blocker")
        b.kind = BoundaryKind::Blocker;
    else
        throw std::invalid_argument("config: unknown boundary kind '" + kind + "'");
    b.thickness = resolved.resolved_thickness();
    b.span = resolved.span;
    b.arc_radius = resolved.resolved_arc_radius();
    b.arc_apex_x = resolved.resolved_arc_apex_x();
    b.blocker_height = resolved.resolved_blocker_height();
    b.blocker_x = resolved.resolved_blocker_x();
    return b;
}

SpringModel make_spring(const ExperimentConfig& c) {
    return {c.spring_stiffness, c.spring_max_force};
}

Scene make_scene(const ExperimentConfig& c, const std::string& kind) {
    Scene scene;
    scene.head = make_head(c);
    scene.air = {c.air_index};
    scene.elastomer = {c.elastomer_index};
    scene.boundary = make_boundary_config(c, kind);
    scene.limits = {c.power_floor, c.bounce_cap};
    scene.scatter = {c.mc_scatter, c.mc_seed};
    return scene;
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig c;
    using Setter = std::function<void(ExperimentConfig&, const std::string&, int)>;
    static const std::map<std::string, Setter> setters = {
        {"head.emitter_x", [](auto& c, auto& v, int n) { c.emitter_x = parse_double(v, n); }},
        {"head.receiver_x", [](auto& c, auto& v, int n) { c.receiver_x = parse_double(v, n); }},
        {"head.half_fov_deg",
         [](auto& c, auto& v, int n) { c.half_fov_deg = parse_double(v, n); }},
        {"head.fan_size", [](auto& c, auto& v, int n) { c.fan_size = parse_int(v, n); }},
        {"head.scatter_fan_size",
         [](auto& c, auto& v, int n) { c.scatter_fan_size = parse_int(v, n); }},
        {"head.aperture_half_width",
         [](auto& c, auto& v, int n) { c.aperture_half_width = parse_double(v, n); }},
        {"media.air_index", [](auto& c, auto& v, int n) { c.air_index = parse_double(v, n); }},
        {"media.elastomer_index",
         [](auto& c, auto& v, int n) { c.elastomer_index = parse_double(v, n); }},
        {"boundary.kind", [](auto& c, auto& v, int) { c.boundary_kind = v; }},
        {"boundary.thickness",
         [](auto& c, auto& v, int n) { c.thickness = parse_double_or_auto(v, n); }},
        {"boundary.span", [](auto& c, auto& v, int n) { c.span = parse_double(v, n); }},
        {"boundary.arc_radius",
         [](auto& c, auto& v, int n) { c.arc_radius = parse_double_or_auto(v, n); }},
        {"boundary.arc_apex_x",
         [](auto& c, auto& v, int n) { c.arc_apex_x = parse_double_or_auto(v, n); }},
        {"boundary.blocker_height",
         [](auto& c, auto& v, int n) { c.blocker_height = parse_double_or_auto(v, n); }},
        {"boundary.blocker_x",
         [](auto& c, auto& v, int n) { c.blocker_x = parse_double_or_auto(v, n); }},
        {"target.distance",
         [](auto& c, auto& v, int n) { c.target_distance = parse_double(v, n); }},
        {"target.reflectivity",
         [](auto& c, auto& v, int n) { c.target_reflectivity = parse_double(v, n); }},
        {"target.half_width",
         [](auto& c, auto& v, int n) { c.target_half_width = parse_double(v, n); }},
        {"spring.stiffness",
         [](auto& c, auto& v, int n) { c.spring_stiffness = parse_double(v, n); }},
        {"spring.max_force",
         [](auto& c, auto& v, int n) { c.spring_max_force = parse_double(v, n); }},
        {"trace.power_floor",
         [](auto& c, auto& v, int n) { c.power_floor = parse_double(v, n); }},
        {"trace.bounce_cap", [](auto& c, auto& v, int n) { c.bounce_cap = parse_int(v, n); }},
        {"trace.mc_scatter", [](auto& c, auto& v, int n) { c.mc_scatter = parse_bool(v, n); }},
        {"trace.mc_seed", [](auto& c, auto& v, int n) { c.mc_seed = parse_u64(v, n); }},
        {"proximity_sweep.min",
         [](auto& c, auto& v, int n) { c.proximity_min = parse_double(v, n); }},
        {"proximity_sweep.max",
         [](auto& c, auto& v, int n) { c.proximity_max = parse_double(v, n); }},
        {"proximity_sweep.step",
         [](auto& c, auto& v, int n) { c.proximity_step = parse_double(v, n); }},
        {"force_sweep.min", [](auto& c, auto& v, int n) { c.press_min = parse_double(v, n); }},
        {"force_sweep.max", [](auto& c, auto& v, int n) { c.press_max = parse_double(v, n); }},
        {"force_sweep.step",
         [](auto& c, auto& v, int n) { c.press_step = parse_double(v, n); }},
        {"calibration.reflectivities",
         [](auto& c, auto& v, int n) { c.reflectivities = parse_double_list(v, n); }},
        {"calibration.contact_drop",
         [](auto& c, auto& v, int n) { c.contact_drop = parse_double(v, n); }},
        {"calibration.force_grid_min",
         [](auto& c, auto& v, int n) { c.force_grid_min = parse_double(v, n); }},
        {"calibration.force_grid_max",
         [](auto& c, auto& v, int n) { c.force_grid_max = parse_double(v, n); }},
        {"calibration.force_grid_step",
         [](auto& c, auto& v, int n) { c.force_grid_step = parse_double(v, n); }},
        {"optimizer.radius_min",
         [](auto& c, auto& v, int n) { c.radius_min = parse_double(v, n); }},
        {"optimizer.radius_max",
         [](auto& c, auto& v, int n) { c.radius_max = parse_double(v, n); }},
        {"optimizer.thickness_min",
         [](auto& c, auto& v, int n) { c.opt_thickness_min = parse_double_or_auto(v, n); }},
        {"optimizer.thickness_max",
         [](auto& c, auto& v, int n) { c.opt_thickness_max = parse_double_or_auto(v, n); }},
        {"optimizer.grid_points",
         [](auto& c, auto& v, int n) { c.grid_points = parse_int(v, n); }},
        {"optimizer.sweeps", [](auto& c, auto& v, int n) { c.refine_sweeps = parse_int(v, n); }},
        {"optimizer.crosstalk_weight",
         [](auto& c, auto& v, int n) { c.crosstalk_weight = parse_double(v, n); }},
        {"optimizer.sensitivity_weight",
         [](auto& c, auto& v, int n) { c.sensitivity_weight = parse_double(v, n); }},
    };

    std::string section;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail_line(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) fail_line(line_no, "empty section name");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) fail_line(line_no, "expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail_line(line_no, "empty key");
        if (section.empty()) fail_line(line_no, "key outside any section");
        auto it = setters.find(section + "." + key);
        if (it == setters.end())
            fail_line(line_no, "unknown key '" + key + "' in section [" + section + "]");
        it->second(c, value, line_no);
    }
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_config(in);
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
    auto auto_note = [&](double stored, double resolved) {
        if (is_auto(stored)) out << "  # resolved: " << format_double(resolved);
        out << "\n";
    };
    out << "[head]\n";
    out << "emitter_x=" << format_double(c.emitter_x) << "\n";
    out << "receiver_x=" << format_double(c.receiver_x) << "\n";
    out << "half_fov_deg=" << format_double(c.half_fov_deg) << "\n";
    out << "fan_size=" << c.fan_size << "\n";
    out << "scatter_fan_size=" << c.scatter_fan_size << "\n";
    out << "aperture_half_width=" << format_double(c.aperture_half_width) << "\n";
    out << "\n[media]\n";
    out << "air_index=" << format_double(c.air_index) << "\n";
    out << "elastomer_index=" << format_double(c.elastomer_index) << "\n";
    out << "\n[boundary]\n";
    out << "kind=" << c.boundary_kind << "\n";
    out << "thickness=" << format_double(c.thickness);
    auto_note(c.thickness, c.resolved_thickness());
    out << "span=" << format_double(c.span) << "\n";
    out << "arc_radius=" << format_double(c.arc_radius);
    auto_note(c.arc_radius, c.resolved_arc_radius());
    out << "arc_apex_x=" << format_double(c.arc_apex_x);
    auto_note(c.arc_apex_x, c.resolved_arc_apex_x());
    out << "blocker_height=" << format_double(c.blocker_height);
    auto_note(c.blocker_height, c.resolved_blocker_height());
    out << "blocker_x=" << format_double(c.blocker_x);
    auto_note(c.blocker_x, c.resolved_blocker_x());
    out << "\n[target]\n";
    out << "distance=" << format_double(c.target_distance) << "\n";
    out << "reflectivity=" << format_double(c.target_reflectivity) << "\n";
    out << "half_width=" << format_double(c.target_half_width) << "\n";
    out << "\n[spring]\n";
    out << "stiffness=" << format_double(c.spring_stiffness) << "\n";
    out << "max_force=" << format_double(c.spring_max_force) << "\n";
    out << "\n[trace]\n";
    out << "power_floor=" << format_double(c.power_floor) << "\n";
    out << "bounce_cap=" << c.bounce_cap << "\n";
    out << "mc_scatter=" << (c.mc_scatter ? "true" : "false") << "\n";
    out << "mc_seed=" << c.mc_seed << "\n";
    out << "\n[proximity_sweep]\n";
    out << "min=" << format_double(c.proximity_min) << "\n";
    out << "max=" << format_double(c.proximity_max) << "\n";
    out << "step=" << format_double(c.proximity_step) << "\n";
    out << "\n[force_sweep]\n";
    out << "min=" << format_double(c.press_min) << "\n";
    out << "max=" << format_double(c.press_max) << "\n";
    out << "step=" << format_double(c.press_step) << "\n";
    out << "\n[calibration]\n";
    out << "reflectivities=" << format_list(c.reflectivities) << "\n";
    out << "contact_drop=" << format_double(c.contact_drop) << "\n";
    out << "force_grid_min=" << format_double(c.force_grid_min) << "\n";
    out << "force_grid_max=" << format_double(c.force_grid_max) << "\n";
    out << "force_grid_step=" << format_double(c.force_grid_step) << "\n";
    out << "\n[optimizer]\n";
    out << "radius_min=" << format_double(c.radius_min) << "\n";
    out << "radius_max=" << format_double(c.radius_max) << "\n";
    out << "thickness_min=" << format_double(c.opt_thickness_min);
    auto_note(c.opt_thickness_min, c.resolved_opt_thickness_min());
    out << "thickness_max=" << format_double(c.opt_thickness_max);
    auto_note(c.opt_thickness_max, c.resolved_opt_thickness_max());
    out << "grid_points=" << c.grid_points << "\n";
    out << "sweeps=" << c.refine_sweeps << "\n";
    out << "crosstalk_weight=" << format_double(c.crosstalk_weight) << "\n";
    out << "sensitivity_weight=" << format_double(c.sensitivity_weight) << "\n";
}

}  // namespace pcf
