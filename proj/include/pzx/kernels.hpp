#pragma once

// Data-parallel loops over frequency and time grids. Each kernel has an
// OpenMP body and a serial reference body that share the per-sample code,
// so both paths produce identical bits.

#include "pzx/execution.hpp"
#include "pzx/templates.hpp"
#include "pzx/time_response.hpp"
#include "pzx/transfer_function.hpp"

#include <cstdint>
#include <span>

namespace pzx::kernels {

/// Below this many samples the parallel path runs serially.
inline constexpr std::size_t kParallelThreshold = 256;

/// values[k] = H(j*omegas[k]); singular[k] = 1 where |den(j omega)| < 1e-300
/// (the value is then +inf).
void frequency_response(const TransferFunction& tf, std::span<const double> omegas, std::span<Complex> values,
                        std::span<std::uint8_t> singular, Execution exec);

void analytic_series(const TemplateInstance& inst, InputKind kind, std::span<const double> times,
                     std::span<double> out, Execution exec);

void stehfest_series(const TransferFunction& tf, InputKind kind, std::span<const double> times,
                     const StehfestWeights& w, std::span<double> out, Execution exec);

} // namespace pzx::kernels
