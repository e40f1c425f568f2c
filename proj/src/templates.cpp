#include "pzx/templates.hpp"

#include "pzx/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace pzx {

namespace {

constexpr double kMatchTolerance = 1e-9;

ParameterSpec gain(std::string name, std::string label) {
    return {std::move(name), std::move(label), 1.0, -5.0, 5.0, false};
}
ParameterSpec time_constant(std::string name, std::string label, double def) {
    return {std::move(name), std::move(label), def, 0.01, 10.0, true};
}

std::vector<TemplateInfo> build_catalog() {
    return {
        {TemplateId::g1, "G1", "first-order system", "k_1/(1+T_1*s)",
         {gain("k_1", "k₁"), time_constant("T_1", "T₁", 1.0)}},
        {TemplateId::g2, "G2", "second-order system with two real poles", "k_2/((1+T_2*s)*(1+T_3*s))",
         {gain("k_2", "k₂"), time_constant("T_2", "T₂", 1.0), time_constant("T_3", "T₃", 0.2)}},
        {TemplateId::g3, "G3", "second-order system with complex poles",
         "k_3*omega_0^2/(s^2+2*zeta*omega_0*s+omega_0^2)",
         {gain("k_3", "k₃"), {"omega_0", "ω₀", 2.0, 0.1, 100.0, true}, {"zeta", "ζ", 0.2, 0.0, 2.0, false}}},
        {TemplateId::g4, "G4", "first-order system with time delay", "3/(1+s)*exp(-L*s)",
         {time_constant("L", "L", 0.5)}},
        {TemplateId::g5, "G5", "system with one zero and two real poles", "k_4*(1+T_8*s)/((1+T_6*s)*(1+T_7*s))",
         {gain("k_4", "k₄"), time_constant("T_6", "T₆", 1.0), time_constant("T_7", "T₇", 0.1),
          time_constant("T_8", "T₈", 0.5)}},
        {TemplateId::g6, "G6", "system with four identical poles", "1/(1+T_5*s)^4",
         {time_constant("T_5", "T₅", 0.5)}},
    };
}

bool close(double a, double b) {
    return std::abs(a - b) <= kMatchTolerance * std::max(std::abs(a), std::abs(b));
}

// Positive time constants of 1 + d1 s + d2 s^2 = (1 + Ta s)(1 + Tb s), Ta >= Tb.
std::optional<std::pair<double, double>> real_time_constants(double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0)) {
        return std::nullopt;
    }
    double disc = d1 * d1 - 4.0 * d2;
    if (disc < 0.0) {
        if (disc < -kMatchTolerance * d1 * d1) {
            return std::nullopt;
        }
        disc = 0.0;
    }
    const double ta = 0.5 * (d1 + std::sqrt(disc));
    return std::pair{ta, d2 / ta};
}

bool is_time_parameter(const std::string& name) { return name.starts_with("T_") || name == "L"; }

} // namespace

const std::vector<TemplateInfo>& template_catalog() {
    static const std::vector<TemplateInfo> catalog = build_catalog();
    return catalog;
}

const TemplateInfo& template_info(TemplateId id) { return template_catalog()[static_cast<std::size_t>(id)]; }

std::string to_string(TemplateId id) { return template_info(id).key; }

TemplateId parse_template_id(std::string_view key) {
    std::string upper(key);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    for (const auto& info : template_catalog()) {
        if (info.key == upper) {
            return info.id;
        }
    }
    throw DomainError("unknown template '" + std::string(key) + "'");
}

double TemplateInstance::at(const std::string& name) const {
    if (auto it = params.find(name); it != params.end()) {
        return it->second;
    }
    throw DomainError("template " + to_string(id) + " has no parameter '" + name + "'");
}

TemplateInstance default_instance(TemplateId id) {
    TemplateInstance inst{id, {}};
    for (const auto& p : template_info(id).params) {
        inst.params[p.name] = p.default_value;
    }
    return inst;
}

void validate(const TemplateInstance& inst) {
    const auto& info = template_info(inst.id);
    if (inst.params.size() != info.params.size()) {
        throw DomainError("template " + info.key + " expects " + std::to_string(info.params.size()) + " parameters");
    }
    for (const auto& spec : info.params) {
        const auto it = inst.params.find(spec.name);
        if (it == inst.params.end()) {
            throw DomainError("template " + info.key + " is missing parameter '" + spec.name + "'");
        }
        const double v = it->second;
        if (!std::isfinite(v)) {
            throw DomainError("parameter '" + spec.name + "' must be finite");
        }
        if (spec.name == "L" || spec.name == "zeta") {
            if (v < 0.0) {
                throw DomainError("parameter '" + spec.name + "' out of range: must be >= 0");
            }
        } else if (is_time_parameter(spec.name) || spec.name == "omega_0") {
            if (!(v > 0.0)) {
                throw DomainError("parameter '" + spec.name + "' out of range: must be > 0");
            }
        }
    }
}

void validate_slider_range(const TemplateInstance& inst) {
    validate(inst);
    for (const auto& spec : template_info(inst.id).params) {
        const double v = inst.params.at(spec.name);
        if (v < spec.min || v > spec.max) {
            throw DomainError("parameter '" + spec.name + "' out of range [" + format_number(spec.min) + ", " +
                              format_number(spec.max) + "]");
        }
    }
}

TransferFunction instantiate(const TemplateInstance& inst) {
    validate(inst);
    const auto p = [&](const char* name) { return inst.params.at(name); };
    switch (inst.id) {
    case TemplateId::g1:
        return {Polynomial{p("k_1")}, Polynomial{1.0, p("T_1")}, 0.0};
    case TemplateId::g2:
        return {Polynomial{p("k_2")}, multiply(Polynomial{1.0, p("T_2")}, Polynomial{1.0, p("T_3")}), 0.0};
    case TemplateId::g3: {
        const double w0 = p("omega_0");
        const double zeta = p("zeta");
        return {Polynomial{p("k_3") * (w0 * w0)}, Polynomial{w0 * w0, 2.0 * zeta * w0, 1.0}, 0.0};
    }
    case TemplateId::g4:
        return {Polynomial{3.0}, Polynomial{1.0, 1.0}, p("L")};
    case TemplateId::g5: {
        const double k = p("k_4");
        return {Polynomial{k, k * p("T_8")}, multiply(Polynomial{1.0, p("T_6")}, Polynomial{1.0, p("T_7")}), 0.0};
    }
    case TemplateId::g6:
        return {Polynomial{1.0}, power(Polynomial{1.0, p("T_5")}, 4), 0.0};
    }
    throw DomainError("unknown template id");
}

std::optional<TemplateInstance> match_template(const TransferFunction& tf) {
    const double d0 = tf.den[0];
    if (d0 == 0.0 || tf.den.is_zero()) {
        return std::nullopt;
    }
    const Polynomial n = scale(tf.num, 1.0 / d0);
    const Polynomial d = scale(tf.den, 1.0 / d0);
    const int nd = n.degree();
    const int dd = d.degree();

    std::optional<TemplateInstance> found;
    if (tf.delay > 0.0) {
        if (nd == 0 && dd == 1 && close(n[0], 3.0) && close(d[1], 1.0)) {
            found = TemplateInstance{TemplateId::g4, {{"L", tf.delay}}};
        }
    } else if (nd == 0 && dd == 1) {
        if (d[1] > 0.0) {
            found = TemplateInstance{TemplateId::g1, {{"k_1", n[0]}, {"T_1", d[1]}}};
        }
    } else if (nd == 0 && dd == 2) {
        if (auto ts = real_time_constants(d[1], d[2])) {
            found = TemplateInstance{TemplateId::g2, {{"k_2", n[0]}, {"T_2", ts->first}, {"T_3", ts->second}}};
        } else if (d[1] >= 0.0 && d[2] > 0.0) {
            const double w0 = 1.0 / std::sqrt(d[2]);
            found = TemplateInstance{TemplateId::g3, {{"k_3", n[0]}, {"omega_0", w0}, {"zeta", 0.5 * d[1] * w0}}};
        }
    } else if (nd == 1 && dd == 2) {
        if (n[0] != 0.0) {
            if (auto ts = real_time_constants(d[1], d[2])) {
                found = TemplateInstance{
                    TemplateId::g5, {{"k_4", n[0]}, {"T_6", ts->first}, {"T_7", ts->second}, {"T_8", n[1] / n[0]}}};
            }
        }
    } else if (nd == 0 && dd == 4) {
        const double t = d[1] / 4.0;
        if (close(n[0], 1.0) && t > 0.0 && close(d[2], 6.0 * t * t) && close(d[3], 4.0 * t * t * t) &&
            close(d[4], t * t * t * t)) {
            found = TemplateInstance{TemplateId::g6, {{"T_5", t}}};
        }
    }
    if (!found) {
        return std::nullopt;
    }
    try {
        validate(*found);
    } catch (const DomainError&) {
        return std::nullopt;
    }
    return found;
}

} // namespace pzx
