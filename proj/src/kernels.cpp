#include "pzx/kernels.hpp"

#include "pzx/error.hpp"

#include "analytic_forms.hpp"

#include <cmath>
#include <limits>

namespace pzx::kernels {

namespace {

constexpr double kSingularDenominator = 1e-300;

Complex frequency_point(const TransferFunction& tf, double omega, std::uint8_t& singular) {
    const Complex s{0.0, omega};
    const Complex den = eval_complex(tf.den, s);
    if (std::abs(den) < kSingularDenominator) {
        singular = 1;
        return {std::numeric_limits<double>::infinity(), 0.0};
    }
    singular = 0;
    Complex h = eval_complex(tf.num, s) / den;
    if (tf.delay != 0.0) {
        h *= std::exp(Complex{0.0, -tf.delay * omega});
    }
    return h;
}

bool run_parallel(Execution exec, std::size_t n) { return exec == Execution::parallel && n >= kParallelThreshold; }

void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) {
        throw DomainError("kernel input and output spans differ in length");
    }
}

} // namespace

void frequency_response(const TransferFunction& tf, std::span<const double> omegas, std::span<Complex> values,
                        std::span<std::uint8_t> singular, Execution exec) {
    require_same_size(omegas.size(), values.size());
    require_same_size(omegas.size(), singular.size());
    const auto n = static_cast<std::ptrdiff_t>(omegas.size());
    if (run_parallel(exec, omegas.size())) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < n; ++k) {
            values[k] = frequency_point(tf, omegas[k], singular[k]);
        }
    } else {
        for (std::ptrdiff_t k = 0; k < n; ++k) {
            values[k] = frequency_point(tf, omegas[k], singular[k]);
        }
    }
}

void analytic_series(const TemplateInstance& inst, InputKind kind, std::span<const double> times,
                     std::span<double> out, Execution exec) {
    require_same_size(times.size(), out.size());
    const AnalyticForm form = analytic_form(inst);
    const auto n = static_cast<std::ptrdiff_t>(times.size());
    if (run_parallel(exec, times.size())) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < n; ++k) {
            out[k] = detail::analytic_sample(form, kind, times[k]);
        }
    } else {
        for (std::ptrdiff_t k = 0; k < n; ++k) {
            out[k] = detail::analytic_sample(form, kind, times[k]);
        }
    }
}

void stehfest_series(const TransferFunction& tf, InputKind kind, std::span<const double> times,
                     const StehfestWeights& w, std::span<double> out, Execution exec) {
    require_same_size(times.size(), out.size());
    const auto n = static_cast<std::ptrdiff_t>(times.size());
    if (run_parallel(exec, times.size())) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < n; ++k) {
            out[k] = numeric_value(tf, kind, times[k], w);
        }
    } else {
        for (std::ptrdiff_t k = 0; k < n; ++k) {
            out[k] = numeric_value(tf, kind, times[k], w);
        }
    }
}

} // namespace pzx::kernels
