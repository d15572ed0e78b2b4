#include "pcf/calibration.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "pcf/sensor.hpp"

namespace pcf {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kGradientTol = 1e-10;

/// Bell-shape basis: the intensity model is kappa*basis(d) + chi once zeta is
/// fixed, so the nonlinear search only has to cover zeta.
double model_basis(double d, double zeta) {
    double radicand = d * d - zeta * zeta;
    return radicand > 0.0 ? std::sqrt(radicand) / (d * d) : 0.0;
}

/// d(model)/d(kappa, zeta, chi); flat {0, 0, 1} on the plateau d <= zeta.
std::array<double, 3> model_jacobian(double d, double kappa, double zeta) {
    double radicand = d * d - zeta * zeta;
    if (radicand <= 1e-12) return {0.0, 0.0, 1.0};
    double root = std::sqrt(radicand);
    return {root / (d * d), -kappa * zeta / (root * d * d), 1.0};
}

/// Solves A x = b for a 3x3 system with partial pivoting.
bool solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b,
            std::array<double, 3>& x) {
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        if (std::abs(a[pivot][col]) < 1e-300) return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int row = col + 1; row < 3; ++row) {
            double f = a[row][col] / a[col][col];
            for (int k = col; k < 3; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    for (int row = 2; row >= 0; --row) {
        double s = b[row];
        for (int k = row + 1; k < 3; ++k) s -= a[row][k] * x[k];
        x[row] = s / a[row][row];
    }
    return true;
}

struct ProjectedFit {
    double kappa = 0.0;
    double chi = 0.0;
    double sse = 0.0;
};

/// Exact nonnegative least squares for (kappa, chi) at a fixed zeta.
ProjectedFit project_linear(const std::vector<IntensitySample>& samples, double zeta) {
    double n = double(samples.size());
    double sgg = 0, sg = 0, sgy = 0, sy = 0;
    for (const auto& s : samples) {
        double g = model_basis(s.range, zeta);
        sgg += g * g;
        sg += g;
        sgy += g * s.intensity;
        sy += s.intensity;
    }
    ProjectedFit fit;
    double det = sgg * n - sg * sg;
    if (det > 1e-300) {
        fit.kappa = (sgy * n - sg * sy) / det;
        fit.chi = (sy * sgg - sg * sgy) / det;
    } else {
        fit.chi = sy / n;  // basis vanished for every sample
    }
    if (fit.kappa < 0.0) {
        fit.kappa = 0.0;
        fit.chi = sy / n;
    }
    if (fit.chi < 0.0) {
        fit.chi = 0.0;
        fit.kappa = sgg > 1e-300 ? std::max(sgy / sgg, 0.0) : 0.0;
    }
    for (const auto& s : samples) {
        double r = fit.kappa * model_basis(s.range, zeta) + fit.chi - s.intensity;
        fit.sse += r * r;
    }
    return fit;
}

std::string read_required_line(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(std::string("truncated ") + what);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

bool parse_key_value(const std::string& line, std::string& key, std::string& value) {
    auto eq = line.find('=');
    if (eq == std::string::npos) return false;
    key = line.substr(0, eq);
    value = line.substr(eq + 1);
    return true;
}

}  // namespace

double IntensityFit::evaluate(double range) const {
    return analytic_intensity(range, kappa, zeta, chi);
}

IntensityFit fit_intensity(const std::vector<IntensitySample>& samples,
                           double reflectivity) {
    if (samples.size() < 4)
        throw std::invalid_argument("fit_intensity: need at least four samples");
    std::vector<double> ranges;
    for (const auto& s : samples) {
        if (!(s.range > 0.0))
            throw std::invalid_argument("fit_intensity: sample ranges must be positive");
        if (s.intensity < 0.0)
            throw std::invalid_argument("fit_intensity: sample intensities must be >= 0");
        ranges.push_back(s.range);
    }
    std::sort(ranges.begin(), ranges.end());
    int distinct = 1;
    for (size_t i = 1; i < ranges.size(); ++i)
        if (ranges[i] - ranges[i - 1] > 1e-12) ++distinct;
    if (distinct < 3)
        throw std::invalid_argument("fit_intensity: need three distinct ranges");

    IntensityFit fit;
    fit.reflectivity = reflectivity;

    // Initialization: the model kink at d = zeta defeats gradient steps
    // started far away, so scan zeta on a grid (solving kappa and chi exactly
    // for each) and tighten the best bracket by golden section. That lands the
    // damped refinement below inside its convergence basin.
    double zeta_cap = 0.995 * ranges.back();
    double best_zeta = 0.0;
    double best_sse = std::numeric_limits<double>::infinity();
    auto consider = [&](double zeta) {
        ProjectedFit candidate = project_linear(samples, zeta);
        if (candidate.sse < best_sse) {
            best_sse = candidate.sse;
            best_zeta = zeta;
        }
        return candidate.sse;
    };

    const int grid = 512;
    int best_index = 0;
    for (int i = 0; i <= grid; ++i) {
        double zeta = zeta_cap * i / grid;
        double sse = consider(zeta);
        if (sse <= best_sse) best_index = i;
    }

    double lo = zeta_cap * std::max(best_index - 1, 0) / grid;
    double hi = zeta_cap * std::min(best_index + 1, grid) / grid;
    constexpr double kInvPhi = 0.6180339887498949;
    double tol = 1e-12 * std::max(1.0, ranges.back());
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = consider(x1);
    double f2 = consider(x2);
    while (hi - lo > tol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = consider(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = consider(x2);
        }
    }

    ProjectedFit solution = project_linear(samples, best_zeta);
    std::array<double, 3> p = {solution.kappa, best_zeta, solution.chi};
    double sse = solution.sse;

    // Damped Gauss-Newton refinement with the analytic Jacobian. Converged
    // once the gradient norm drops below tolerance; a step is accepted only if
    // it lowers the squared error, otherwise damping grows until exhausted.
    auto sse_at = [&](const std::array<double, 3>& q) {
        double total = 0.0;
        for (const auto& s : samples) {
            double r = analytic_intensity(s.range, q[0], q[1], q[2]) - s.intensity;
            total += r * r;
        }
        return total;
    };
    bool converged = false;
    double lambda = 1e-3;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        fit.iterations = iter + 1;
        std::array<std::array<double, 3>, 3> jtj{};
        std::array<double, 3> grad{};
        for (const auto& s : samples) {
            auto j = model_jacobian(s.range, p[0], p[1]);
            double r = analytic_intensity(s.range, p[0], p[1], p[2]) - s.intensity;
            for (int a = 0; a < 3; ++a) {
                grad[a] += j[a] * r;
                for (int b = 0; b < 3; ++b) jtj[a][b] += j[a] * j[b];
            }
        }
        double gmax = std::max({std::abs(grad[0]), std::abs(grad[1]), std::abs(grad[2])});
        if (gmax < kGradientTol) {
            converged = true;
            break;
        }
        bool stepped = false;
        while (lambda <= 1e12) {
            auto damped = jtj;
            for (int a = 0; a < 3; ++a) damped[a][a] += lambda * std::max(jtj[a][a], 1e-12);
            std::array<double, 3> step{};
            if (solve3(damped, grad, step)) {
                std::array<double, 3> candidate = {std::max(p[0] - step[0], 0.0),
                                                   std::max(p[1] - step[1], 0.0),
                                                   std::max(p[2] - step[2], 0.0)};
                double candidate_sse = sse_at(candidate);
                if (candidate_sse < sse) {
                    p = candidate;
                    sse = candidate_sse;
                    lambda = std::max(lambda * 0.1, 1e-12);
                    stepped = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if (!stepped) break;  // Damping exhausted: at the best reachable point.
    }

    fit.kappa = p[0];
    fit.zeta = p[1];
    fit.chi = p[2];
    fit.rms_residual = std::sqrt(sse / samples.size());
    fit.converged = converged;
    return fit;
}

ReflectivityEstimate characterize_reflectivity(const std::vector<IntensityFit>& fits,
                                               double range, double intensity) {
    if (fits.size() < 2)
        throw std::invalid_argument("characterize_reflectivity: need at least two fits");
    std::vector<IntensityFit> sorted = fits;
    std::sort(sorted.begin(), sorted.end(),
              [](const IntensityFit& a, const IntensityFit& b) {
                  return a.reflectivity < b.reflectivity;
              });
    if (sorted.back().reflectivity - sorted.front().reflectivity < 1e-12)
        throw std::invalid_argument(
            "characterize_reflectivity: fits must span distinct reflectivities");

    std::vector<double> predicted;
    predicted.reserve(sorted.size());
    for (const auto& f : sorted) predicted.push_back(f.evaluate(range));

    // Work with predictions mapped to an increasing sequence so brighter
    // observations land on higher reflectivity regardless of family direction.
    double sign = predicted.back() >= predicted.front() ? 1.0 : -1.0;
    double lo = predicted.front() * sign;
    double hi = predicted.back() * sign;
    double value = intensity * sign;
    double span = std::max(hi - lo, 1e-15);

    ReflectivityEstimate est;
    est.extrapolated = value < lo - 0.2 * span || value > hi + 0.2 * span;

    size_t seg = 0;
    if (value <= lo) {
        seg = 0;
    } else if (value >= hi) {
        seg = sorted.size() - 2;
    } else {
        for (size_t i = 0; i + 1 < sorted.size(); ++i) {
            double a = predicted[i] * sign;
            double b = predicted[i + 1] * sign;
            if (value >= std::min(a, b) && value <= std::max(a, b)) {
                seg = i;
                break;
            }
        }
    }
    double pa = predicted[seg] * sign;
    double pb = predicted[seg + 1] * sign;
    double ra = sorted[seg].reflectivity;
    double rb = sorted[seg + 1].reflectivity;
    double rho = std::abs(pb - pa) < 1e-15
                     ? 0.5 * (ra + rb)
                     : ra + (value - pa) * (rb - ra) / (pb - pa);
    est.reflectivity = std::clamp(rho, 0.0, 1.0);
    return est;
}

ForceTable build_force_table(const std::vector<ForceTable::Knot>& raw) {
    ForceTable table;
    for (const auto& knot : raw) {
        if (table.knots.empty() || knot.intensity < table.knots.back().intensity)
            table.knots.push_back(knot);
    }
    return table;
}

ForceEstimate infer_force(const ForceTable& table, double intensity) {
    if (table.empty()) throw std::invalid_argument("infer_force: empty table");
    const auto& knots = table.knots;  // intensity descends along the knots
    ForceEstimate est;
    est.saturated =
        intensity > knots.front().intensity || intensity < knots.back().intensity;
    if (intensity >= knots.front().intensity) {
        est.force = knots.front().force;
        return est;
    }
    if (intensity <= knots.back().intensity) {
        est.force = knots.back().force;
        return est;
    }
    for (size_t i = 0; i + 1 < knots.size(); ++i) {
        if (intensity >= knots[i + 1].intensity) {
            double a = knots[i].intensity;
            double b = knots[i + 1].intensity;
            double t = a - b < 1e-15 ? 0.0 : (a - intensity) / (a - b);
            est.force = knots[i].force + t * (knots[i + 1].force - knots[i].force);
            return est;
        }
    }
    est.force = knots.back().force;
    return est;
}

void write_intensity_fit(std::ostream& out, const IntensityFit& fit) {
    out << "pcfsim-fit v1\n" << std::setprecision(17);
    out << "kappa=" << fit.kappa << "\n";
    out << "zeta=" << fit.zeta << "\n";
    out << "chi=" << fit.chi << "\n";
    out << "reflectivity=" << fit.reflectivity << "\n";
    out << "rms_residual=" << fit.rms_residual << "\n";
    out << "iterations=" << fit.iterations << "\n";
    out << "converged=" << (fit.converged ? 1 : 0) << "\n";
}

IntensityFit read_intensity_fit(std::istream& in) {
    if (read_required_line(in, "fit file") != "pcfsim-fit v1")
        throw std::runtime_error("unrecognized fit file header");
    IntensityFit fit;
    bool have_kappa = false, have_zeta = false, have_chi = false;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::string key, value;
        if (!parse_key_value(line, key, value))
            throw std::runtime_error("malformed fit line: " + line);
        if (key == "kappa") {
            fit.kappa = std::stod(value);
            have_kappa = true;
        } else if (key == "zeta") {
            fit.zeta = std::stod(value);
            have_zeta = true;
        } else if (key == "chi") {
            fit.chi = std::stod(value);
            have_chi = true;
        } else if (key == "reflectivity") {
            fit.reflectivity = std::stod(value);
        } else if (key == "rms_residual") {
            fit.rms_residual = std::stod(value);
        } else if (key == "iterations") {
            fit.iterations = std::stoi(value);
        } else if (key == "converged") {
            fit.converged = std::stoi(value) != 0;
        }
        // unknown keys are ignored for forward compatibility
    }
    if (!have_kappa || !have_zeta || !have_chi)
        throw std::runtime_error("fit file missing kappa/zeta/chi");
    return fit;
}

void write_force_table(std::ostream& out, const ForceTable& table) {
    out << "pcfsim-force-table v1\n" << std::setprecision(17);
    out << "knots=" << table.knots.size() << "\n";
    for (const auto& knot : table.knots)
        out << knot.intensity << " " << knot.force << "\n";
}

ForceTable read_force_table(std::istream& in) {
    if (read_required_line(in, "force table") != "pcfsim-force-table v1")
        throw std::runtime_error("unrecognized force table header");
    ForceTable table;
    std::string key, value;
    if (!parse_key_value(read_required_line(in, "force table"), key, value) ||
        key != "knots")
        throw std::runtime_error("force table missing knot count");
    int count = std::stoi(value);
    if (count < 0) throw std::runtime_error("negative knot count");
    for (int i = 0; i < count; ++i) {
        std::istringstream row(read_required_line(in, "force table knot"));
        ForceTable::Knot knot;
        if (!(row >> knot.intensity >> knot.force))
            throw std::runtime_error("malformed force table knot");
        table.knots.push_back(knot);
    }
    return table;
}

}  // namespace pcf
