#include "pcf/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcf {

namespace {

Scene arc_scene(const Scene& prototype, double radius, double thickness, double depth,
                double reflectivity) {
    Scene scene = prototype;
    if (!scene.boundary || scene.boundary->kind != BoundaryKind::Arc)
        throw std::invalid_argument("optimizer: prototype must carry an arc boundary");
    scene.boundary->arc_radius = radius;
    scene.boundary->thickness = thickness;
    if (depth > 0.0) {
        scene.indentation.depth = depth;
        TargetSpec target;
        target.distance = thickness - depth;
        target.reflectivity = reflectivity;
        scene.target = target;
    } else {
        scene.indentation.depth = 0.0;
        scene.target.reset();
    }
    return scene;
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (hi - lo < 1e-12) return {lo};
    std::vector<double> values;
    values.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) values.push_back(lo + (hi - lo) * i / (n - 1));
    return values;
}

struct Evaluator {
    const Scene& prototype;
    const ObjectiveSpec& weights;
    const OptimizerOptions& options;
    int evaluations = 0;
    std::vector<OptimResult::Evaluation> trace;

    OptimResult evaluate(double radius, double thickness) {
        OptimResult r;
        r.radius = radius;
        r.thickness = thickness;
        r.crosstalk = arc_crosstalk(prototype, radius, thickness);
        r.sensitivity = weights.sensitivity_weight != 0.0
                            ? arc_sensitivity(prototype, radius, thickness,
                                              options.sensitivity_rho, options.press_depths)
                            : 0.0;
        r.objective = weights.crosstalk_weight * r.crosstalk -
                      weights.sensitivity_weight * r.sensitivity;
        ++evaluations;
        trace.push_back({r.radius, r.thickness, r.crosstalk, r.sensitivity, r.objective});
        return r;
    }
};

/// Golden-section scan of one coordinate. Returns the best interior probe;
/// the caller decides whether it beats the incumbent.
OptimResult golden_refine(Evaluator& eval, double lo, double hi, double fixed,
                          bool radius_axis, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    auto probe = [&](double v) {
        return radius_axis ? eval.evaluate(v, fixed) : eval.evaluate(fixed, v);
    };
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    OptimResult f1 = probe(x1);
    OptimResult f2 = probe(x2);
    OptimResult best = f1.objective <= f2.objective ? f1 : f2;
    while (b - a > tol) {
        if (f1.objective <= f2.objective) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = probe(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = probe(x2);
        }
        const OptimResult& cand = f1.objective <= f2.objective ? f1 : f2;
        if (cand.objective < best.objective ||
            (cand.objective == best.objective && cand.radius < best.radius))
            best = cand;
    }
    return best;
}

}  // namespace

double arc_crosstalk(const Scene& prototype, double radius, double thickness) {
    Scene scene = arc_scene(prototype, radius, thickness, 0.0, 0.0);
    return simulate(scene).crosstalk;
}

double arc_sensitivity(const Scene& prototype, double radius, double thickness,
                       double reflectivity, const std::vector<double>& depths) {
    if (depths.size() < 2) return 0.0;
    std::vector<double> sorted = depths;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> intensities;
    intensities.reserve(sorted.size());
    for (double depth : sorted) {
        if (depth <= 0.0 || depth >= thickness)
            throw std::invalid_argument("optimizer: press depth outside (0, thickness)");
        Scene scene = arc_scene(prototype, radius, thickness, depth, reflectivity);
        intensities.push_back(simulate(scene).intensity);
    }
    double total = 0.0;
    for (size_t i = 1; i < sorted.size(); ++i)
        total += std::abs(intensities[i] - intensities[i - 1]) /
                 (sorted[i] - sorted[i - 1]);
    return total / (sorted.size() - 1);
}

OptimResult optimize_arc(const Scene& prototype, const OptimBox& box,
                         const ObjectiveSpec& weights,
                         const OptimizerOptions& options) {
    if (box.radius_min <= 0.0 || box.radius_max < box.radius_min)
        throw std::invalid_argument("optimize_arc: invalid radius bounds");
    if (box.thickness_min <= 0.0 || box.thickness_max < box.thickness_min)
        throw std::invalid_argument("optimize_arc: invalid thickness bounds");
    if (options.grid_points < 2)
        throw std::invalid_argument("optimize_arc: grid_points must be >= 2");

    Evaluator eval{prototype, weights, options, 0, {}};

    auto radii = linspace(box.radius_min, box.radius_max, options.grid_points);
    auto thicknesses = linspace(box.thickness_min, box.thickness_max, options.grid_points);

    // Radius is the outer ascending loop so equal objectives resolve to the
    // smallest radius via the strict-improvement update.
    OptimResult best;
    bool have_best = false;
    for (double radius : radii) {
        for (double thickness : thicknesses) {
            OptimResult r = eval.evaluate(radius, thickness);
            if (!have_best || r.objective < best.objective) {
                best = r;
                have_best = true;
            }
        }
    }

    auto bracket = [](const std::vector<double>& grid, double center, double lo,
                      double hi) {
        double step = grid.size() > 1 ? grid[1] - grid[0] : 0.0;
        return std::pair<double, double>{std::max(lo, center - step),
                                         std::min(hi, center + step)};
    };

    for (int sweep = 0; sweep < options.sweeps; ++sweep) {
        if (radii.size() > 1) {
            auto [lo, hi] = bracket(radii, best.radius, box.radius_min, box.radius_max);
            if (hi - lo > options.golden_tol) {
                OptimResult r =
                    golden_refine(eval, lo, hi, best.thickness, true, options.golden_tol);
                if (r.objective < best.objective) best = r;
            }
        }
        if (thicknesses.size() > 1) {
            auto [lo, hi] =
                bracket(thicknesses, best.thickness, box.thickness_min, box.thickness_max);
            if (hi - lo > options.golden_tol) {
                OptimResult r =
                    golden_refine(eval, lo, hi, best.radius, false, options.golden_tol);
                if (r.objective < best.objective) best = r;
            }
        }
    }

    best.evaluations = eval.evaluations;
    best.trace = std::move(eval.trace);
    return best;
}

}  // namespace pcf
