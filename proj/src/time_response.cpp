#include "pzx/time_response.hpp"

#include "pzx/error.hpp"
#include "pzx/kernels.hpp"

#include "analytic_forms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace pzx {

namespace {

// Initial value at t = 0+ from the behavior as s -> infinity.
double initial_value(const TransferFunction& tf, InputKind kind) {
    const int rel = tf.den.degree() - tf.num.degree();
    if (tf.num.is_zero() || rel > 1) {
        return 0.0;
    }
    if (kind == InputKind::step) {
        return rel == 0 ? tf.num.leading() / tf.den.leading() : 0.0;
    }
    if (rel == 1) {
        return tf.num.leading() / tf.den.leading();
    }
    // Biproper: the direct feedthrough is a Dirac impulse at 0; report the
    // regular part of h(0+).
    const Polynomial rem = divide(tf.num, tf.den).remainder;
    if (!rem.is_zero() && rem.degree() == tf.den.degree() - 1) {
        return rem.leading() / tf.den.leading();
    }
    return 0.0;
}

long double factorial(int n) {
    long double f = 1.0L;
    for (int i = 2; i <= n; ++i) {
        f *= static_cast<long double>(i);
    }
    return f;
}

TimeResponse make_response(const TimeGrid& grid, ResponseMethod method, InputKind kind) {
    validate(grid);
    return {grid.times, std::vector<double>(grid.times.size(), 0.0), method, kind};
}

} // namespace

std::string to_string(InputKind kind) { return kind == InputKind::step ? "step" : "impulse"; }

std::string to_string(ResponseMethod method) {
    return method == ResponseMethod::analytic ? "analytic" : "gaver_stehfest";
}

InputKind parse_input_kind(std::string_view text) {
    if (text == "step") {
        return InputKind::step;
    }
    if (text == "impulse") {
        return InputKind::impulse;
    }
    throw DomainError("unknown input kind '" + std::string(text) + "'");
}

TimeGrid linear_time_grid(double tmax, std::size_t n) {
    if (n < 2 || !(tmax > 0.0) || !std::isfinite(tmax)) {
        throw DomainError("time grid needs n >= 2 and a positive finite tmax");
    }
    TimeGrid grid;
    grid.times.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        grid.times[k] = tmax * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    return grid;
}

void validate(const TimeGrid& grid) {
    if (grid.times.empty()) {
        throw DomainError("time grid is empty");
    }
    if (!(grid.times.front() >= 0.0)) {
        throw DomainError("time grid must start at t >= 0");
    }
    for (std::size_t k = 1; k < grid.times.size(); ++k) {
        if (!(grid.times[k] > grid.times[k - 1]) || !std::isfinite(grid.times[k])) {
            throw DomainError("time grid must be strictly increasing and finite");
        }
    }
}

TimeGrid default_time_grid(const TransferFunction& tf, std::size_t n) {
    double tau = 0.0;
    bool any_pole = false;
    for (const Complex& p : poles(tf)) {
        any_pole = true;
        if (p.real() < 0.0) {
            tau = std::max(tau, -1.0 / p.real());
        }
    }
    double tmax = 50.0;
    if (!any_pole) {
        tmax = 10.0 + tf.delay;
    } else if (tau > 0.0) {
        tmax = 10.0 * tau + tf.delay;
    }
    // Three significant digits hide root-finding noise in repeated poles.
    const double scale = std::pow(10.0, 2.0 - std::floor(std::log10(tmax)));
    return linear_time_grid(std::min(50.0, std::round(tmax * scale) / scale), n);
}

StehfestWeights stehfest_weights(int n) {
    if (n < 2 || n > 20 || n % 2 != 0) {
        throw DomainError("Stehfest order must be even and within [2, 20]");
    }
    const int half = n / 2;
    StehfestWeights w{n, std::vector<long double>(static_cast<std::size_t>(n), 0.0L)};
    for (int i = 1; i <= n; ++i) {
        long double sum = 0.0L;
        for (int k = (i + 1) / 2; k <= std::min(i, half); ++k) {
            const long double numer = std::pow(static_cast<long double>(k), half) * factorial(2 * k);
            const long double denom =
                factorial(half - k) * factorial(k) * factorial(k - 1) * factorial(i - k) * factorial(2 * k - i);
            sum += numer / denom;
        }
        w.zeta[static_cast<std::size_t>(i - 1)] = ((i + half) % 2 == 0 ? 1.0L : -1.0L) * sum;
    }
    return w;
}

const StehfestWeights& default_weights() {
    static const StehfestWeights w = stehfest_weights(10);
    return w;
}

AnalyticForm analytic_form(const TemplateInstance& inst) {
    const auto p = [&](const char* name) { return inst.params.at(name); };
    switch (inst.id) {
    case TemplateId::g1: return {inst.id, {p("k_1"), p("T_1"), 0.0, 0.0}};
    case TemplateId::g2: return {inst.id, {p("k_2"), p("T_2"), p("T_3"), 0.0}};
    case TemplateId::g3: return {inst.id, {p("k_3"), p("omega_0"), p("zeta"), 0.0}};
    case TemplateId::g4: return {inst.id, {p("L"), 0.0, 0.0, 0.0}};
    case TemplateId::g5: return {inst.id, {p("k_4"), p("T_6"), p("T_7"), p("T_8")}};
    case TemplateId::g6: return {inst.id, {p("T_5"), 0.0, 0.0, 0.0}};
    }
    throw DomainError("unknown template id");
}

double analytic_value(const AnalyticForm& f, InputKind kind, double t) { return detail::analytic_sample(f, kind, t); }

double analytic_value(const TemplateInstance& inst, InputKind kind, double t) {
    return analytic_value(analytic_form(inst), kind, t);
}

TimeResponse step_analytic(const TemplateInstance& inst, const TimeGrid& grid, Execution exec) {
    validate(inst);
    TimeResponse r = make_response(grid, ResponseMethod::analytic, InputKind::step);
    kernels::analytic_series(inst, InputKind::step, r.times, r.values, exec);
    return r;
}

TimeResponse impulse_analytic(const TemplateInstance& inst, const TimeGrid& grid, Execution exec) {
    validate(inst);
    TimeResponse r = make_response(grid, ResponseMethod::analytic, InputKind::impulse);
    kernels::analytic_series(inst, InputKind::impulse, r.times, r.values, exec);
    return r;
}

double numeric_value(const TransferFunction& tf, InputKind kind, double t, const StehfestWeights& w) {
    if (tf.delay == 0.0 && t == 0.0) {
        return initial_value(tf, kind);
    }
    const double tau = t - tf.delay;
    if (tau <= 0.0) {
        return 0.0;
    }
    if (kind == InputKind::step) {
        return gaver_stehfest_sum([&](double s) { return evaluate_rational(tf, s) / s; }, tau, w);
    }
    return gaver_stehfest_sum([&](double s) { return evaluate_rational(tf, s); }, tau, w);
}

TimeResponse step_numeric(const TransferFunction& tf, const TimeGrid& grid, const StehfestWeights& w,
                          Execution exec) {
    validate(tf);
    TimeResponse r = make_response(grid, ResponseMethod::gaver_stehfest, InputKind::step);
    kernels::stehfest_series(tf, InputKind::step, r.times, w, r.values, exec);
    return r;
}

TimeResponse impulse_numeric(const TransferFunction& tf, const TimeGrid& grid, const StehfestWeights& w,
                             Execution exec) {
    validate(tf);
    TimeResponse r = make_response(grid, ResponseMethod::gaver_stehfest, InputKind::impulse);
    kernels::stehfest_series(tf, InputKind::impulse, r.times, w, r.values, exec);
    return r;
}

TimeResponse respond(const TransferFunction& tf, InputKind kind, const TimeGrid& grid) {
    if (auto inst = match_template(tf)) {
        return kind == InputKind::step ? step_analytic(*inst, grid) : impulse_analytic(*inst, grid);
    }
    return kind == InputKind::step ? step_numeric(tf, grid, default_weights())
                                   : impulse_numeric(tf, grid, default_weights());
}

} // namespace pzx
