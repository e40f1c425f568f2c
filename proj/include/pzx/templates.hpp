#pragma once

#include "pzx/expression.hpp"
#include "pzx/transfer_function.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pzx {

/// The six built-in system families.
enum class TemplateId { g1, g2, g3, g4, g5, g6 };

inline constexpr std::size_t kTemplateCount = 6;

struct ParameterSpec {
    std::string name; ///< canonical symbol, e.g. "T_1", "omega_0"
    std::string label; ///< display form, e.g. "T₁", "ω₀"
    double default_value;
    double min;
    double max;
    bool log_scale;
};

struct TemplateInfo {
    TemplateId id;
    std::string key; ///< "G1".."G6"
    std::string description;
    std::string expression; ///< symbolic form accepted by parse_transfer_function
    std::vector<ParameterSpec> params;
};

const std::vector<TemplateInfo>& template_catalog();
const TemplateInfo& template_info(TemplateId id);
std::string to_string(TemplateId id);
/// Accepts "G1".."G6" (case-insensitive). Throws DomainError otherwise.
TemplateId parse_template_id(std::string_view key);

struct TemplateInstance {
    TemplateId id;
    ParameterEnv params;

    double at(const std::string& name) const;
    friend bool operator==(const TemplateInstance&, const TemplateInstance&) = default;
};

TemplateInstance default_instance(TemplateId id);

/// Checks the structural invariants (T > 0, omega_0 > 0, zeta >= 0, L >= 0,
/// finite gains) and that exactly the template's symbols are present.
void validate(const TemplateInstance& inst);

/// Additionally checks every parameter against its slider range.
void validate_slider_range(const TemplateInstance& inst);

TransferFunction instantiate(const TemplateInstance& inst);

/// Recovers a template and its parameters from coefficient structure
/// (relative tolerance 1e-9). Real-pole second-order denominators match G2.
std::optional<TemplateInstance> match_template(const TransferFunction& tf);

} // namespace pzx
