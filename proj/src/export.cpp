#include "pzx/export.hpp"

#include "pzx/error.hpp"
#include "pzx/expression.hpp"
#include "pzx/time_response.hpp"

#include <cctype>

namespace pzx {

namespace {

constexpr int kPadeOrder = 10;

std::string sanitize(std::string_view name) {
    std::string out;
    for (unsigned char c : name) {
        out.push_back(std::isalnum(c) ? static_cast<char>(std::tolower(c)) : '_');
    }
    if (out.empty() || !std::isalpha(static_cast<unsigned char>(out.front()))) {
        out.insert(0, "sys_");
    }
    return out;
}

std::string python_script(const TransferFunction& tf, std::string_view name, const std::string& tmax) {
    std::string s;
    s += "# " + std::string(name) + " exported from pzx.\n";
    s += "import control as ct\n";
    s += "import matplotlib.pyplot as plt\n\n";
    s += "num = " + coefficient_literal(tf.num) + "\n";
    s += "den = " + coefficient_literal(tf.den) + "\n";
    s += "G = ct.tf(num, den)\n";
    if (tf.delay > 0.0) {
        s += "# python-control has no exact delay element: e^(-L*s) is replaced by a\n";
        s += "# Pade approximation of order " + std::to_string(kPadeOrder) + ".\n";
        s += "delay = " + format_number(tf.delay) + "\n";
        s += "G = G * ct.tf(*ct.pade(delay, " + std::to_string(kPadeOrder) + "))\n";
    }
    s += "\nt, y = ct.step_response(G, T=" + tmax + ")\n";
    s += "plt.figure()\n";
    s += "plt.plot(t, y)\n";
    s += "plt.xlabel(\"t [s]\")\n";
    s += "plt.title(\"Step response of " + std::string(name) + "\")\n";
    s += "plt.grid(True)\n\n";
    s += "plt.figure()\n";
    s += "ct.bode_plot(G, dB=True)\n";
    s += "plt.show()\n";
    return s;
}

std::string matlab_script(const TransferFunction& tf, std::string_view name, const std::string& tmax) {
    std::string s;
    s += "% " + std::string(name) + " exported from pzx.\n";
    s += "num = " + coefficient_literal(tf.num) + ";\n";
    s += "den = " + coefficient_literal(tf.den) + ";\n";
    if (tf.delay > 0.0) {
        s += "G = tf(num, den, 'InputDelay', " + format_number(tf.delay) + ");\n";
    } else {
        s += "G = tf(num, den);\n";
    }
    s += "\nfigure;\n";
    s += "step(G, " + tmax + ");\n";
    s += "title('Step response of " + std::string(name) + "');\n";
    s += "grid on;\n\n";
    s += "figure;\n";
    s += "bode(G);\n";
    s += "grid on;\n";
    return s;
}

std::string julia_script(const TransferFunction& tf, std::string_view name, const std::string& tmax) {
    std::string s;
    s += "# " + std::string(name) + " exported from pzx.\n";
    s += "using ControlSystems\n";
    s += "using Plots\n\n";
    s += "num = " + coefficient_literal(tf.num) + "\n";
    s += "den = " + coefficient_literal(tf.den) + "\n";
    if (tf.delay > 0.0) {
        s += "G = tf(num, den) * delay(" + format_number(tf.delay) + ")\n";
    } else {
        s += "G = tf(num, den)\n";
    }
    s += "\np1 = plot(step(G, " + tmax + "), title = \"Step response of " + std::string(name) + "\")\n";
    s += "p2 = bodeplot(G)\n";
    s += "display(p1)\n";
    s += "display(p2)\n";
    return s;
}

} // namespace

std::string to_string(ExportTarget t) {
    switch (t) {
    case ExportTarget::python: return "python";
    case ExportTarget::matlab: return "matlab";
    case ExportTarget::julia: return "julia";
    }
    return "?";
}

ExportTarget parse_export_target(std::string_view text) {
    for (ExportTarget t : kAllExportTargets) {
        if (to_string(t) == text) {
            return t;
        }
    }
    throw DomainError("unknown export target '" + std::string(text) + "' (expected python, matlab or julia)");
}

std::vector<double> descending(const Polynomial& p) {
    const auto& c = p.coefficients();
    return {c.rbegin(), c.rend()};
}

std::string coefficient_literal(const Polynomial& p) {
    std::string s = "[";
    bool first = true;
    for (double c : descending(p)) {
        if (!first) {
            s += ", ";
        }
        s += format_number(c);
        first = false;
    }
    return s + "]";
}

SourceText generate_code(const TransferFunction& tf, ExportTarget target, std::string_view name) {
    validate(tf);
    const std::string tmax = format_number(default_time_grid(tf).times.back());
    const std::string base = sanitize(name);
    switch (target) {
    case ExportTarget::python:
        return {python_script(tf, name, tmax), target, base + ".py"};
    case ExportTarget::matlab:
        return {matlab_script(tf, name, tmax), target, base + ".m"};
    case ExportTarget::julia:
        return {julia_script(tf, name, tmax), target, base + ".jl"};
    }
    throw DomainError("unknown export target");
}

} // namespace pzx
