#include "pzx/cli.hpp"

#include "pzx/config.hpp"
#include "pzx/error.hpp"
#include "pzx/export.hpp"
#include "pzx/http_server.hpp"
#include "pzx/serialization.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

namespace pzx {

namespace {

struct Options {
    std::string expression;
    std::vector<std::string> params;
    std::optional<double> wmin;
    std::optional<double> wmax;
    std::optional<std::size_t> points;
    std::optional<double> tmax;
    std::string format = "csv";
    std::string out;
    std::string target = "python";
    std::string input = "step";
    std::string config;
};

ParameterEnv parse_params(const std::vector<std::string>& items) {
    ParameterEnv env;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw DomainError("--param expects NAME=VALUE, got '" + item + "'");
        }
        const std::string value = item.substr(eq + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != value.size() || value.empty()) {
            throw DomainError("--param " + item.substr(0, eq) + ": '" + value + "' is not a number");
        }
        env[canonical_symbol(item.substr(0, eq))] = v;
    }
    return env;
}

// A bare template key (G1..G6) selects its default instance; --param then
// overrides template parameters. Anything else is parsed as an expression.
TransferFunction resolve_system(const Options& o, std::string& name) {
    const ParameterEnv env = parse_params(o.params);
    static const std::regex key(R"([gG][1-6])");
    if (std::regex_match(o.expression, key)) {
        TemplateInstance inst = default_instance(parse_template_id(o.expression));
        for (const auto& [k, v] : env) {
            if (!inst.params.contains(k)) {
                throw DomainError("unknown parameter '" + k + "' for " + to_string(inst.id));
            }
            inst.params[k] = v;
        }
        name = to_string(inst.id);
        return instantiate(inst);
    }
    name = "system";
    return parse_transfer_function(o.expression, env);
}

std::string num(double v) { return format_number(v); }

std::string csv_bode(const FrequencyResponse& fr) {
    std::string s = "omega,mag_db,phase_deg\n";
    for (std::size_t k = 0; k < fr.size(); ++k) {
        s += num(fr.omegas[k]) + "," + num(fr.mag_db[k]) + "," + num(fr.phase_deg[k]) + "\n";
    }
    return s;
}

std::string csv_nyquist(const FrequencyResponse& fr) {
    std::string s = "omega,re,im\n";
    for (const auto& p : nyquist_curve(fr)) {
        s += num(p.omega) + "," + num(p.re) + "," + num(p.im) + "\n";
    }
    return s;
}

std::string csv_time(const TimeResponse& r) {
    std::string s = "t,y\n";
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        s += num(r.times[k]) + "," + num(r.values[k]) + "\n";
    }
    return s;
}

std::string csv_margins(const StabilityMargins& m) {
    const auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string{}; };
    return "gain_margin,gm_db,omega_pc,phase_margin_deg,omega_gc\n" + num(m.gain_margin) + "," + num(m.gm_db) +
           "," + opt(m.omega_pc) + "," + opt(m.phase_margin_deg) + "," + opt(m.omega_gc) + "\n";
}

std::string csv_pzmap(const PoleZeroMap& m) {
    std::string s = "kind,re,im\n";
    for (Complex p : m.poles) {
        s += "pole," + num(p.real()) + "," + num(p.imag()) + "\n";
    }
    for (Complex z : m.zeros) {
        s += "zero," + num(z.real()) + "," + num(z.imag()) + "\n";
    }
    return s;
}

std::string csv_polynomial(const char* label, const Polynomial& p) {
    std::string s = label;
    for (double c : p.coefficients()) {
        s += "," + num(c);
    }
    return s + "\n";
}

Json parse_payload(const TransferFunction& tf) {
    Json j = to_json(tf);
    j["expression"] = to_expression(tf);
    j["pzmap"] = pzmap_payload(pole_zero_map(tf));
    const auto match = match_template(tf);
    j["template"] = match ? to_json(*match) : Json(nullptr);
    return j;
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) {
        throw DomainError("cannot write " + o.out);
    }
}

std::string run_command(const std::string& cmd, const Options& o) {
    std::string name;
    const TransferFunction tf = resolve_system(o, name);
    const bool json = o.format == "json";
    if (cmd == "parse") {
        if (json) {
            return parse_payload(tf).dump(2) + "\n";
        }
        return csv_polynomial("num", tf.num) + csv_polynomial("den", tf.den) + "delay," + num(tf.delay) + "\n";
    }
    if (cmd == "bode" || cmd == "nyquist") {
        ViewParams p{o.wmin, o.wmax, o.points, std::nullopt, std::nullopt};
        const FrequencyResponse fr = freq_response(tf, view_frequency_grid(tf, p));
        if (cmd == "bode") {
            return json ? bode_payload(fr).dump() + "\n" : csv_bode(fr);
        }
        return json ? nyquist_payload(fr).dump() + "\n" : csv_nyquist(fr);
    }
    if (cmd == "step") {
        ViewParams p{std::nullopt, std::nullopt, std::nullopt, o.tmax, o.points};
        const TimeResponse r = respond(tf, parse_input_kind(o.input), view_time_grid(tf, p));
        return json ? time_payload(r).dump() + "\n" : csv_time(r);
    }
    if (cmd == "margins") {
        const StabilityMargins m = margins(tf);
        return json ? to_json(m).dump(2) + "\n" : csv_margins(m);
    }
    if (cmd == "pzmap") {
        const PoleZeroMap m = pole_zero_map(tf);
        return json ? pzmap_payload(m).dump(2) + "\n" : csv_pzmap(m);
    }
    if (cmd == "export") {
        return generate_code(tf, parse_export_target(o.target), name).text;
    }
    throw DomainError("unknown command '" + cmd + "'");
}

int serve(const Options& o, std::ostream& out) {
    const Config cfg = load_config(o.config.empty() ? std::nullopt : std::optional<std::filesystem::path>(o.config));
    std::vector<AssignmentDef> assignments = assignment_catalog();
    if (cfg.assignments_file) {
        std::ifstream in(*cfg.assignments_file);
        if (!in) {
            throw DomainError("cannot read " + cfg.assignments_file->string());
        }
        std::stringstream text;
        text << in.rdbuf();
        assignments = load_assignment_catalog(text.str());
    }
    SessionStore store(cfg.data_dir);
    Api api(store, std::move(assignments));
    HttpServer server(api);
    const int port = server.bind(cfg.listen_address, cfg.port);
    if (port < 0) {
        throw DomainError("cannot listen on " + cfg.listen_address + ":" + std::to_string(cfg.port));
    }
    out << "pzx listening on http://" << cfg.listen_address << ":" << port << " (data in "
        << cfg.data_dir.string() << ")" << std::endl;
    return server.listen_after_bind() ? kExitOk : kExitNumeric;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pole-zero explorer: transfer-function analysis from the command line", "pzx"};
    app.require_subcommand(1);
    Options o;

    const auto add_system_args = [&](CLI::App* sub) {
        sub->add_option("expression", o.expression, "Transfer function, e.g. \"1/(1+s)^2\", or a template key G1..G6")
            ->required();
        sub->add_option("--param", o.params, "Symbol binding NAME=VALUE (repeatable)");
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", o.out, "Write output to FILE instead of stdout");
    };
    const auto add_freq_args = [&](CLI::App* sub) {
        sub->add_option("--wmin", o.wmin, "Lowest frequency in rad/s (default 0.01)");
        sub->add_option("--wmax", o.wmax, "Highest frequency in rad/s (default 1000)");
        sub->add_option("--points", o.points, "Number of log-spaced frequencies (default 1000)");
    };

    std::vector<CLI::App*> subs;
    subs.push_back(app.add_subcommand("parse", "Normalize an expression to num/den/delay"));
    subs.push_back(app.add_subcommand("bode", "Bode magnitude and phase"));
    subs.push_back(app.add_subcommand("nyquist", "Nyquist curve"));
    subs.push_back(app.add_subcommand("step", "Step or impulse response"));
    subs.push_back(app.add_subcommand("margins", "Gain and phase margins"));
    subs.push_back(app.add_subcommand("pzmap", "Poles and zeros"));
    subs.push_back(app.add_subcommand("export", "Python, MATLAB or Julia script"));
    for (CLI::App* sub : subs) {
        add_system_args(sub);
    }
    add_freq_args(subs[1]);
    add_freq_args(subs[2]);
    subs[3]->add_option("--tmax", o.tmax, "End time in seconds (default from the slowest pole)");
    subs[3]->add_option("--points", o.points, "Number of time samples (default 500)");
    subs[3]->add_option("--input", o.input, "Input signal")->check(CLI::IsMember({"step", "impulse"}));
    subs[6]->add_option("--target", o.target, "Target ecosystem")->check(CLI::IsMember({"python", "matlab", "julia"}));
    CLI::App* serve_cmd = app.add_subcommand("serve", "Run the HTTP JSON API");
    serve_cmd->add_option("--config", o.config, "JSON config file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (serve_cmd->parsed()) {
            return serve(o, out);
        }
        for (CLI::App* sub : subs) {
            if (sub->parsed()) {
                emit(o, run_command(sub->get_name(), o), out);
            }
        }
        return kExitOk;
    } catch (const ExpressionError& e) {
        err << "parse error: " << e.what() << "\n";
        if (!o.expression.empty()) {
            err << "  " << o.expression << "\n  " << std::string(e.offset(), ' ') << "^\n";
        }
        return kExitParse;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

} // namespace pzx
