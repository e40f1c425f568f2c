#include "pzx/freq_analysis.hpp"

#include "pzx/error.hpp"
#include "pzx/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace pzx {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr int kMaxBisection = 60;
constexpr double kPhaseTolerance = 1e-9; // degrees
constexpr double kMagnitudeTolerance = 1e-10; // dB

double raw_phase_deg(Complex h) { return std::arg(h) * kRadToDeg; }

// Phase at omega, shifted by a multiple of 360 to be nearest to `reference`.
double phase_near(const TransferFunction& tf, double omega, double reference) {
    const double raw = raw_phase_deg(evaluate(tf, Complex{0.0, omega}));
    return raw + 360.0 * std::round((reference - raw) / 360.0);
}

double magnitude_db(const TransferFunction& tf, double omega) {
    return 20.0 * std::log10(std::abs(evaluate(tf, Complex{0.0, omega})));
}

// Root of f on [lo, hi] (in log omega) given f(lo), f(hi) of opposite sign.
// The first probe is the log-linear interpolant, then plain bisection.
template <class F>
double refine_crossing(F&& f, double lo, double hi, double f_lo, double f_hi, double tolerance) {
    double a = std::log(lo);
    double b = std::log(hi);
    double fa = f_lo;
    double x = a + (b - a) * fa / (fa - f_hi);
    for (int iter = 0; iter < kMaxBisection; ++iter) {
        const double fx = f(std::exp(x));
        if (std::abs(fx) <= tolerance) {
            break;
        }
        if ((fx < 0.0) == (fa < 0.0)) {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        x = 0.5 * (a + b);
    }
    return std::exp(x);
}

double interpolate_log(double w, double w0, double w1, double v0, double v1) {
    const double u = (std::log(w) - std::log(w0)) / (std::log(w1) - std::log(w0));
    return v0 + u * (v1 - v0);
}

} // namespace

void validate(const FrequencyGrid& grid) {
    if (grid.omegas.empty()) {
        throw DomainError("frequency grid is empty");
    }
    for (std::size_t k = 0; k < grid.omegas.size(); ++k) {
        if (!(grid.omegas[k] > 0.0) || !std::isfinite(grid.omegas[k])) {
            throw DomainError("frequency grid values must be positive and finite");
        }
        if (k > 0 && !(grid.omegas[k] > grid.omegas[k - 1])) {
            throw DomainError("frequency grid must be strictly increasing");
        }
    }
}

FrequencyGrid log_grid(double wmin, double wmax, std::size_t n) {
    if (n < 2) {
        throw DomainError("frequency grid needs at least 2 points");
    }
    if (!(wmin > 0.0) || !(wmax > wmin) || !std::isfinite(wmax)) {
        throw DomainError("frequency grid needs 0 < wmin < wmax");
    }
    const double lo = std::log10(wmin);
    const double hi = std::log10(wmax);
    FrequencyGrid grid;
    grid.omegas.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        grid.omegas[k] = std::pow(10.0, lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
    }
    grid.omegas.front() = wmin;
    grid.omegas.back() = wmax;
    return grid;
}

FrequencyGrid default_grid(std::size_t n) { return log_grid(1e-2, 1e3, n); }

FrequencyGrid densify_for_delay(const FrequencyGrid& grid, double delay) {
    if (!(delay >= 0.0)) {
        throw DomainError("delay must be nonnegative");
    }
    if (delay == 0.0 || grid.omegas.size() < 2) {
        return grid;
    }
    constexpr double max_step = std::numbers::pi / 2.0;
    FrequencyGrid out;
    out.omegas.reserve(grid.omegas.size());
    out.omegas.push_back(grid.omegas.front());
    for (std::size_t k = 1; k < grid.omegas.size(); ++k) {
        const double a = grid.omegas[k - 1];
        const double b = grid.omegas[k];
        const double span = delay * (b - a);
        if (span > max_step) {
            const auto pieces = static_cast<std::size_t>(std::ceil(span / max_step * (1.0 + 1e-12)));
            for (std::size_t j = 1; j < pieces; ++j) {
                out.omegas.push_back(a + (b - a) * static_cast<double>(j) / static_cast<double>(pieces));
            }
        }
        out.omegas.push_back(b);
    }
    return out;
}

double wrap_degrees(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w > 180.0) {
        w -= 360.0;
    } else if (w <= -180.0) {
        w += 360.0;
    }
    return w;
}

std::vector<double> unwrap_phase(std::span<const double> raw_phase_deg, std::span<const double> omegas) {
    if (raw_phase_deg.size() != omegas.size()) {
        throw DomainError("phase and frequency sequences differ in length");
    }
    std::vector<double> out(raw_phase_deg.size());
    if (out.empty()) {
        return out;
    }
    out[0] = wrap_degrees(raw_phase_deg[0]);
    for (std::size_t k = 1; k < out.size(); ++k) {
        const double raw = raw_phase_deg[k];
        out[k] = raw + 360.0 * std::round((out[k - 1] - raw) / 360.0);
    }
    return out;
}

FrequencyResponse freq_response(const TransferFunction& tf, const FrequencyGrid& grid, Execution exec) {
    validate(tf);
    validate(grid);
    FrequencyResponse fr;
    const std::size_t n = grid.omegas.size();
    fr.omegas = grid.omegas;
    fr.values.resize(n);
    fr.singular.resize(n);
    kernels::frequency_response(tf, fr.omegas, fr.values, fr.singular, exec);

    fr.mag_db.resize(n);
    std::vector<double> raw(n);
    double last = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (fr.singular[k]) {
            fr.mag_db[k] = std::numeric_limits<double>::infinity();
            raw[k] = last;
        } else {
            fr.mag_db[k] = 20.0 * std::log10(std::abs(fr.values[k]));
            raw[k] = raw_phase_deg(fr.values[k]);
            last = raw[k];
        }
    }
    fr.phase_deg = unwrap_phase(raw, fr.omegas);
    return fr;
}

std::vector<NyquistPoint> nyquist_curve(const FrequencyResponse& fr) {
    std::vector<NyquistPoint> out;
    out.reserve(fr.size());
    for (std::size_t k = 0; k < fr.size(); ++k) {
        if (fr.singular[k]) {
            continue;
        }
        const double mag = std::abs(fr.values[k]);
        const double phi = fr.phase_deg[k] / kRadToDeg;
        out.push_back({fr.omegas[k], mag * std::cos(phi), mag * std::sin(phi)});
    }
    return out;
}

StabilityMargins margins(const TransferFunction& tf) {
    const FrequencyGrid grid = densify_for_delay(default_grid(1000), tf.delay);
    const FrequencyResponse fr = freq_response(tf, grid);
    const auto& w = fr.omegas;
    const auto& ph = fr.phase_deg;
    const auto& mag = fr.mag_db;

    StabilityMargins m{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                       std::nullopt, std::nullopt, std::nullopt};

    // Phase crossover: first -180 degree crossing, scanning upward in omega.
    for (std::size_t k = 0; k + 1 < fr.size(); ++k) {
        if (fr.singular[k] || fr.singular[k + 1]) {
            continue;
        }
        const double f0 = ph[k] + 180.0;
        const double f1 = ph[k + 1] + 180.0;
        double omega = 0.0;
        if (f0 == 0.0) {
            omega = w[k];
        } else if ((f0 < 0.0) != (f1 < 0.0) || f1 == 0.0) {
            const auto f = [&](double om) {
                return phase_near(tf, om, interpolate_log(om, w[k], w[k + 1], ph[k], ph[k + 1])) + 180.0;
            };
            omega = refine_crossing(f, w[k], w[k + 1], f0, f1, kPhaseTolerance);
        } else {
            continue;
        }
        const double gain = std::abs(evaluate(tf, Complex{0.0, omega}));
        m.omega_pc = omega;
        m.gain_margin = 1.0 / gain;
        m.gm_db = -20.0 * std::log10(gain);
        break;
    }

    // Gain crossover: highest downward crossing of 0 dB, else highest upward one.
    std::optional<std::size_t> down;
    std::optional<std::size_t> up;
    for (std::size_t k = 0; k + 1 < fr.size(); ++k) {
        if (fr.singular[k] || fr.singular[k + 1]) {
            continue;
        }
        if (mag[k] >= 0.0 && mag[k + 1] < 0.0) {
            down = k;
        } else if (mag[k] < 0.0 && mag[k + 1] >= 0.0) {
            up = k;
        }
    }
    if (const auto bracket = down ? down : up) {
        const std::size_t k = *bracket;
        double omega = w[k];
        if (mag[k] != 0.0) {
            const auto f = [&](double om) { return magnitude_db(tf, om); };
            omega = refine_crossing(f, w[k], w[k + 1], mag[k], mag[k + 1], kMagnitudeTolerance);
        }
        const double phase = phase_near(tf, omega, interpolate_log(omega, w[k], w[k + 1], ph[k], ph[k + 1]));
        m.omega_gc = omega;
        m.phase_margin_deg = 180.0 + phase;
    }
    return m;
}

} // namespace pzx
