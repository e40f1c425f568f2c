#pragma once

#include "pzx/execution.hpp"
#include "pzx/transfer_function.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pzx {

struct FrequencyGrid {
    std::vector<double> omegas; ///< rad/s, strictly increasing, all > 0
};

void validate(const FrequencyGrid& grid);

/// n log-uniform points on [1e-2, 1e3].
FrequencyGrid default_grid(std::size_t n = 1000);
/// n log-uniform points on [wmin, wmax].
FrequencyGrid log_grid(double wmin, double wmax, std::size_t n);

/// Inserts evenly spaced points so that delay * (omega[k+1] - omega[k]) <= pi/2.
FrequencyGrid densify_for_delay(const FrequencyGrid& grid, double delay);

struct FrequencyResponse {
    std::vector<double> omegas;
    std::vector<Complex> values;
    std::vector<double> mag_db;
    std::vector<double> phase_deg; ///< unwrapped
    std::vector<std::uint8_t> singular; ///< 1 where the denominator vanished

    std::size_t size() const noexcept { return omegas.size(); }
};

FrequencyResponse freq_response(const TransferFunction& tf, const FrequencyGrid& grid,
                                Execution exec = Execution::parallel);

/// Maps into (-180, 180].
double wrap_degrees(double deg);

/// First sample wrapped into (-180, 180]; each later sample shifted by a
/// multiple of 360 to lie within 180 degrees of its predecessor.
std::vector<double> unwrap_phase(std::span<const double> raw_phase_deg, std::span<const double> omegas);

struct NyquistPoint {
    double omega;
    double re;
    double im;
};

/// Built from magnitude and unwrapped phase; singular samples are skipped.
std::vector<NyquistPoint> nyquist_curve(const FrequencyResponse& fr);

struct StabilityMargins {
    double gain_margin; ///< ratio, +inf when there is no phase crossover
    double gm_db;
    std::optional<double> omega_pc;
    std::optional<double> phase_margin_deg;
    std::optional<double> omega_gc;
};

/// Gain and phase margins of the open-loop response over [1e-2, 1e3].
StabilityMargins margins(const TransferFunction& tf);

} // namespace pzx
