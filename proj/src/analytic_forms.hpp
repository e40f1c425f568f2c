#pragma once

// Closed-form template responses, inline so the kernels can evaluate them in
// tight loops.

#include "pzx/error.hpp"
#include "pzx/time_response.hpp"

#include <algorithm>
#include <cmath>

namespace pzx::detail {

// 1 - e^{-x} for x >= 0. expm1 only where the subtraction would cancel.
inline double one_minus_exp(double x) { return x < 0.5 ? -std::expm1(-x) : 1.0 - std::exp(-x); }

// expm1(x)/x, continuous at 0.
inline double phi(double x) { return x == 0.0 ? 1.0 : std::expm1(x) / x; }

inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// Unit-gain 1/((1+Ta s)(1+Tb s)). Written around the slower pole so the
// confluent limit Ta == Tb is reached without cancellation.
struct TwoRealPoles {
    double fast;
    double slow;

    TwoRealPoles(double ta, double tb) : fast(std::min(ta, tb)), slow(std::max(ta, tb)) {}

    double x(double t) const { return t * (fast - slow) / (fast * slow); }

    double step(double t) const { return 1.0 - std::exp(-t / slow) * (1.0 + (t / slow) * phi(x(t))); }
    double impulse(double t) const { return std::exp(-t / slow) * t / (fast * slow) * phi(x(t)); }
    // d/dt of impulse()
    double impulse_rate(double t) const {
        return std::exp(-t / slow) / (fast * slow) * (1.0 - t * phi(x(t)) / fast);
    }
};

inline double g3_value(double k, double w0, double zeta, InputKind kind, double t) {
    if (zeta > 1.0) {
        const double root = std::sqrt(zeta * zeta - 1.0);
        const double p_fast = w0 * (zeta + root);
        const double p_slow = w0 / (zeta + root);
        const TwoRealPoles poles(1.0 / p_fast, 1.0 / p_slow);
        return k * (kind == InputKind::step ? poles.step(t) : poles.impulse(t));
    }
    const double wd = w0 * std::sqrt(1.0 - zeta * zeta);
    const double decay = std::exp(-zeta * w0 * t);
    if (kind == InputKind::step) {
        return k * (1.0 - decay * (std::cos(wd * t) + zeta * w0 * t * sinc(wd * t)));
    }
    return k * w0 * w0 * t * decay * sinc(wd * t);
}

inline double analytic_sample(const AnalyticForm& f, InputKind kind, double t) {
    const auto& p = f.params;
    const bool step = kind == InputKind::step;
    switch (f.id) {
    case TemplateId::g1: {
        const double k = p[0];
        const double tc = p[1];
        return step ? k * one_minus_exp(t / tc) : k / tc * std::exp(-t / tc);
    }
    case TemplateId::g2: {
        const TwoRealPoles poles(p[1], p[2]);
        return p[0] * (step ? poles.step(t) : poles.impulse(t));
    }
    case TemplateId::g3:
        return g3_value(p[0], p[1], p[2], kind, t);
    case TemplateId::g4: {
        const double tau = t - p[0];
        if (tau < 0.0) {
            return 0.0;
        }
        return step ? 3.0 * one_minus_exp(tau) : 3.0 * std::exp(-tau);
    }
    case TemplateId::g5: {
        const TwoRealPoles poles(p[1], p[2]);
        const double k = p[0];
        const double zero = p[3];
        return step ? k * (poles.step(t) + zero * poles.impulse(t))
                    : k * (poles.impulse(t) + zero * poles.impulse_rate(t));
    }
    case TemplateId::g6: {
        const double tc = p[0];
        const double x = t / tc;
        if (step) {
            return 1.0 - std::exp(-x) * (1.0 + x + x * x / 2.0 + x * x * x / 6.0);
        }
        return std::exp(-x) * x * x * x / (6.0 * tc);
    }
    }
    throw DomainError("unknown template id");
}

} // namespace pzx::detail
