#pragma once

#include "pzx/error.hpp"
#include "pzx/execution.hpp"
#include "pzx/templates.hpp"
#include "pzx/transfer_function.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pzx {

enum class InputKind { step, impulse };
enum class ResponseMethod { analytic, gaver_stehfest };

std::string to_string(InputKind kind);
std::string to_string(ResponseMethod method);
InputKind parse_input_kind(std::string_view text);

struct TimeGrid {
    std::vector<double> times; ///< seconds, strictly increasing, times[0] >= 0
};

/// n evenly spaced samples on [0, tmax].
TimeGrid linear_time_grid(double tmax, std::size_t n);
void validate(const TimeGrid& grid);

/// 500 samples on [0, min(50, 10*tau + L)], tau the slowest stable time
/// constant (50 s when there is none).
TimeGrid default_time_grid(const TransferFunction& tf, std::size_t n = 500);

struct TimeResponse {
    std::vector<double> times;
    std::vector<double> values;
    ResponseMethod method;
    InputKind input_kind;
};

/// Stehfest coefficients zeta_1..zeta_n. Stored in extended precision: the
/// coefficients reach 1e9 for n = 16 and double rounding alone would break
/// the sum(zeta_i / i) == 1 identity.
struct StehfestWeights {
    int n;
    std::vector<long double> zeta;
};

/// n even, 2 <= n <= 20.
StehfestWeights stehfest_weights(int n);
/// Shared n = 10 table.
const StehfestWeights& default_weights();

/// (ln2/t) * sum zeta_i F(i ln2 / t); NaN if any sample of F is non-finite.
template <class F>
double gaver_stehfest_sum(F&& laplace, double t, const StehfestWeights& w) {
    const long double a = 0.693147180559945309417232121458176568L / static_cast<long double>(t);
    long double acc = 0.0L;
    for (int i = 1; i <= w.n; ++i) {
        const double v = laplace(static_cast<double>(a * i));
        if (!std::isfinite(v)) {
            return std::nan("");
        }
        acc += w.zeta[static_cast<std::size_t>(i - 1)] * v;
    }
    return static_cast<double>(a * acc);
}

/// Throws DomainError for t <= 0 and NumericError when F is non-finite at an abscissa.
template <class F>
double invert_laplace_gs(F&& laplace, double t, const StehfestWeights& w) {
    if (!(t > 0.0)) {
        throw DomainError("Gaver-Stehfest inversion requires t > 0");
    }
    const double v = gaver_stehfest_sum(laplace, t, w);
    if (!std::isfinite(v)) {
        throw NumericError("Laplace-domain function is not finite at a Stehfest abscissa");
    }
    return v;
}

/// Template parameters resolved once, in catalog order, for per-sample evaluation.
struct AnalyticForm {
    TemplateId id;
    std::array<double, 4> params;
};

AnalyticForm analytic_form(const TemplateInstance& inst);

/// Closed-form responses of the template families.
double analytic_value(const AnalyticForm& form, InputKind kind, double t);
double analytic_value(const TemplateInstance& inst, InputKind kind, double t);
TimeResponse step_analytic(const TemplateInstance& inst, const TimeGrid& grid, Execution exec = Execution::parallel);
TimeResponse impulse_analytic(const TemplateInstance& inst, const TimeGrid& grid,
                              Execution exec = Execution::parallel);

/// Numerical inversion of the rational part with an exact time shift for the delay.
double numeric_value(const TransferFunction& tf, InputKind kind, double t, const StehfestWeights& w);
TimeResponse step_numeric(const TransferFunction& tf, const TimeGrid& grid, const StehfestWeights& w,
                          Execution exec = Execution::parallel);
TimeResponse impulse_numeric(const TransferFunction& tf, const TimeGrid& grid, const StehfestWeights& w,
                             Execution exec = Execution::parallel);

/// Analytic path when the system matches a template, Gaver-Stehfest (n = 10) otherwise.
TimeResponse respond(const TransferFunction& tf, InputKind kind, const TimeGrid& grid);

} // namespace pzx
