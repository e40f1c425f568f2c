#pragma once

#include "pzx/transfer_function.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace pzx {

enum class ExportTarget { python, matlab, julia };

inline constexpr std::array kAllExportTargets{ExportTarget::python, ExportTarget::matlab, ExportTarget::julia};

std::string to_string(ExportTarget t);
ExportTarget parse_export_target(std::string_view text);

struct SourceText {
    std::string text;
    ExportTarget target;
    std::string filename;
};

/// Coefficients in descending powers of s, as emitted in the scripts.
std::vector<double> descending(const Polynomial& p);

/// "[c_n, ..., c_0]" with shortest round-trip numbers.
std::string coefficient_literal(const Polynomial& p);

/// Script that rebuilds tf and plots its step response and Bode diagram.
/// `name` labels the plots and seeds the filename.
SourceText generate_code(const TransferFunction& tf, ExportTarget target, std::string_view name = "system");

} // namespace pzx
