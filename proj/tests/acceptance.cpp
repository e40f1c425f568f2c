// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "fixtures.hpp"

#include "pzx/freq_analysis.hpp"
#include "pzx/poly.hpp"
#include "pzx/serialization.hpp"
#include "pzx/time_response.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace pzx;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

TimeGrid range_grid(double t0, double t1, std::size_t n) {
    TimeGrid g;
    for (std::size_t i = 0; i < n; ++i) {
        g.times.push_back(t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return g;
}

Verdict frequency_response_correctness() {
    double worst_mag = 0, worst_phase = 0;
    for (const auto& info : template_catalog()) {
        const auto inst = default_instance(info.id);
        const auto tf = instantiate(inst);
        const auto fr = freq_response(tf, densify_for_delay(default_grid(1000), tf.delay));
        for (std::size_t k = 0; k < fr.size(); ++k) {
            const auto ref = oracle::template_response(inst, fr.omegas[k]);
            worst_mag = std::max(worst_mag, std::abs(std::abs(fr.values[k]) - ref.mag) / ref.mag);
            worst_phase = std::max(worst_phase, std::abs(fr.phase_deg[k] - ref.phase_deg));
        }
    }
    return {worst_mag <= 1e-9 && worst_phase <= 1e-6,
            "G1-G6 max relative magnitude error " + fmt(worst_mag) + ", max phase error " + fmt(worst_phase) + " deg"};
}

Verdict gain_margin_fourth_order() {
    const auto m = margins(parse_transfer_function("1/(1+s)^4"));
    if (!m.omega_pc) return {false, "no phase crossover found"};
    const bool ok = std::abs(m.gain_margin - 4.0) <= 1e-3 && std::abs(m.gm_db - 12.041) <= 0.01 &&
                    std::abs(*m.omega_pc - 1.0) <= 1e-3;
    return {ok, "GM " + fmt(m.gain_margin) + " (" + fmt(m.gm_db) + " dB) at omega_pc " + fmt(*m.omega_pc)};
}

Verdict phase_margin_integrator() {
    const auto m = margins(parse_transfer_function("1/(s*(1+s))"));
    if (!m.omega_gc || !m.phase_margin_deg) return {false, "no gain crossover found"};
    const bool ok = std::abs(*m.phase_margin_deg - 51.827) <= 0.01 && std::abs(*m.omega_gc - 0.78615) <= 1e-4;
    return {ok, "PM " + fmt(*m.phase_margin_deg) + " deg at omega_gc " + fmt(*m.omega_gc)};
}

Verdict gaver_stehfest_validation() {
    const auto w = stehfest_weights(10);
    const TransferFunction g1{Polynomial{1}, Polynomial{1, 1}, 0.0};
    double worst = 0;
    for (double t : range_grid(0.05, 20.0, 400).times) {
        worst = std::max(worst, std::abs(numeric_value(g1, InputKind::step, t, w) - (1 - std::exp(-t))));
    }
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.01, 50);
    double worst_unit = 0;
    for (int i = 0; i < 50; ++i) {
        worst_unit = std::max(worst_unit, std::abs(invert_laplace_gs([](double s) { return 1.0 / s; }, u(rng), w) - 1));
    }
    return {worst <= 1e-4 && worst_unit <= 1e-8,
            "G1/s max error " + fmt(worst) + " on [0.05, 20] (limit 1e-4), 1/s max error " + fmt(worst_unit)};
}

Verdict oscillatory_limitation() {
    const TemplateInstance inst{TemplateId::g3, {{"k_3", 1.0}, {"omega_0", 1.0}, {"zeta", 0.1}}};
    const auto tf = instantiate(inst);
    const auto grid = range_grid(1.0, 30.0, 600);
    double gs_error = 0;
    for (double t : grid.times) {
        gs_error = std::max(gs_error, std::abs(numeric_value(tf, InputKind::step, t, default_weights()) -
                                               analytic_value(inst, InputKind::step, t)));
    }
    const auto r = respond(tf, InputKind::step, grid);
    const auto ode = oracle::second_order_rk4(1.0, 1.0, 0.1, false, grid.times);
    double ode_error = 0;
    for (std::size_t i = 0; i < grid.times.size(); ++i) ode_error = std::max(ode_error, std::abs(r.values[i] - ode[i]));
    const bool ok = gs_error > 0.05 && r.method == ResponseMethod::analytic && ode_error <= 1e-6;
    return {ok, "GS error " + fmt(gs_error) + " (must exceed 0.05), dispatcher " + to_string(r.method) +
                    " vs ODE " + fmt(ode_error)};
}

Verdict delay_unwrap() {
    const auto fr = freq_response(parse_transfer_function("exp(-2*s)/(1+s)"), densify_for_delay(default_grid(1000), 2.0));
    double worst = 0;
    for (std::size_t k = 0; k < fr.size(); ++k) {
        const double w = fr.omegas[k];
        worst = std::max(worst, std::abs(fr.phase_deg[k] * kPi / 180 - (-std::atan(w) - 2 * w)));
    }
    const bool ok = worst <= 1e-3 && fr.omegas.back() == 1000.0;
    return {ok, std::to_string(fr.size()) + " samples to omega " + fmt(fr.omegas.back()) + ", max error " +
                    fmt(worst) + " rad"};
}

Verdict parser_corpus() {
    const auto out = fixture::render_corpus(fixture::load_corpus(PZX_GOLDEN_DIR));
    const std::string golden = oracle::read_file(std::string(PZX_GOLDEN_DIR) + "/parser_corpus.golden");
    const bool ok = out.entries == 30 && out.errors == 10 && out.text == golden;
    return {ok, std::to_string(out.entries) + " entries, " + std::to_string(out.errors) + " rejected, golden " +
                    (out.text == golden ? "identical" : "differs")};
}

Verdict root_suite() {
    std::mt19937_64 rng(20240611);
    double worst_residual = 0, worst_distance = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto rs = fixture::random_stable_roots(rng);
        const auto p = from_roots(rs, 1.0);
        const auto found = roots(p);
        if (found.size() != rs.size()) return {false, "root count mismatch in trial " + std::to_string(trial)};
        for (const auto& r : found) worst_residual = std::max(worst_residual, normalized_residual(p, r));
        worst_distance = std::max(worst_distance, oracle::root_set_distance(rs, found));
    }
    return {worst_residual <= 1e-8 && worst_distance <= 1e-6,
            "500 systems, max residual " + fmt(worst_residual) + ", max round-trip error " + fmt(worst_distance)};
}

Verdict quiz_state_machine() {
    std::mt19937_64 rng(2024);
    for (int seq = 0; seq < 10000; ++seq) {
        const std::uint64_t base = rng();
        const auto violation = fixture::check_quiz_sequence(base, true);
        if (!violation.empty()) return {false, "sequence " + std::to_string(seq) + ": " + violation};
    }
    return {true, "10000 sequences of 12 answers, all replayed"};
}

Verdict performance() {
    const auto inst = default_instance(TemplateId::g1);
    const auto tf = instantiate(inst);
    const auto grid = linear_time_grid(10.0, 500);
    double sink = 0;
    const auto median_of = [](const std::function<void()>& fn) {
        std::vector<double> samples;
        for (int i = 0; i < 20; ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            fn();
            samples.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        }
        std::nth_element(samples.begin(), samples.begin() + 10, samples.end());
        return samples[10];
    };
    const auto analytic_run = [&] { sink += step_analytic(inst, grid, Execution::serial).values.back(); };
    const auto numeric_run = [&] { sink += step_numeric(tf, grid, default_weights(), Execution::serial).values.back(); };
    analytic_run();
    numeric_run();
    const double a = median_of(analytic_run);
    const double n = median_of(numeric_run);
    const double ratio = n / a;
    return {ratio >= 5.0 && std::isfinite(sink), "analytic " + fmt(a * 1e6) + " us, GS " + fmt(n * 1e6) +
                                                     " us, ratio " + fmt(ratio)};
}

Verdict session_round_trip() {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 200; ++i) {
        const auto s = fixture::random_session(rng, i);
        const auto doc = save_session(s);
        const auto loaded = load_session(doc);
        if (!(loaded == s) || save_session(loaded) != doc) return {false, "session " + std::to_string(i) + " differs"};
    }
    return {true, "200 sessions byte-identical after save, load, save"};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, Verdict (*)()>> criteria{
        {"frequency-response correctness", frequency_response_correctness},
        {"gain margin of 1/(1+s)^4", gain_margin_fourth_order},
        {"phase margin of 1/(s(1+s))", phase_margin_integrator},
        {"Gaver-Stehfest validation", gaver_stehfest_validation},
        {"oscillatory limitation", oscillatory_limitation},
        {"phase unwrapping with delay", delay_unwrap},
        {"parser corpus", parser_corpus},
        {"root-finding property suite", root_suite},
        {"quiz state machine", quiz_state_machine},
        {"performance", performance},
        {"session round trip", session_round_trip},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !v.pass;
        std::printf("%s  %s: %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), secs);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
