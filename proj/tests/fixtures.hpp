#pragma once

// Workload generators shared by the unit tests and the acceptance binary.

#include "oracles.hpp"

#include "pzx/error.hpp"
#include "pzx/gamification.hpp"
#include "pzx/session.hpp"

#include <random>

namespace fixture {

using pzx::Complex;

// Random stable conjugate-closed root set of degree 1..6 with |Re| in [0.01, 100].
inline std::vector<Complex> random_stable_roots(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> deg(1, 6);
    std::uniform_real_distribution<double> logmag(-2.0, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = deg(rng);
    std::vector<Complex> rs;
    while (static_cast<int>(rs.size()) < n) {
        const double re = -std::pow(10.0, logmag(rng));
        if (n - static_cast<int>(rs.size()) >= 2 && unit(rng) < 0.5) {
            const double im = std::pow(10.0, logmag(rng));
            rs.emplace_back(re, im);
            rs.emplace_back(re, -im);
        } else {
            rs.emplace_back(re, 0.0);
        }
    }
    return rs;
}

inline pzx::QuizAnswer correct_answer(const pzx::QuizQuestion& q) {
    using pzx::QuizCategory;
    pzx::QuizAnswer a;
    switch (q.category) {
    case QuizCategory::click_frequency:
    case QuizCategory::click_time: a.value = q.target; break;
    case QuizCategory::click_nyquist_angle: a.point = std::polar(0.7, q.target * std::numbers::pi / 180); break;
    default: a.choice = q.answer_index.value(); break;
    }
    return a;
}

inline pzx::QuizAnswer wrong_answer(const pzx::QuizQuestion& q) {
    using pzx::QuizCategory;
    pzx::QuizAnswer a;
    switch (q.category) {
    case QuizCategory::click_frequency: a.value = q.target * 10.0; break;
    case QuizCategory::click_time: a.value = q.target + q.time_span * 0.5; break;
    case QuizCategory::click_nyquist_angle:
        a.point = std::polar(0.7, (q.target + 90.0) * std::numbers::pi / 180);
        break;
    default: a.choice = (q.answer_index.value() + 1) % static_cast<int>(q.systems.size()); break;
    }
    return a;
}

// Outcome of one quiz step, recorded for replay.
struct QuizStep {
    pzx::QuizQuestion question;
    pzx::QuizState state;
};

// Runs a 12-step random answer sequence from seed `base`. Returns an empty
// string when every law holds, otherwise a description of the first violation.
inline std::string check_quiz_sequence(std::uint64_t base, bool replay) {
    using namespace pzx;
    const auto draw = [](std::mt19937_64& r) {
        const auto cat = kAllQuizCategories[r() % kAllQuizCategories.size()];
        const std::uint64_t seed = r();
        const bool try_correct = r() % 3 != 0;
        return std::tuple{cat, seed, try_correct};
    };
    QuizState qs;
    std::vector<QuizStep> trace;
    std::mt19937_64 local(base);
    for (int step = 0; step < 12; ++step) {
        const auto [cat, seed, try_correct] = draw(local);
        const auto q = next_question(qs, cat, seed);
        const bool ok = grade(q, try_correct ? correct_answer(q) : wrong_answer(q)).correct;
        if (ok != try_correct) return "grading disagrees with the constructed answer";
        const QuizState next = update_difficulty(qs, cat, ok);
        for (QuizCategory other : kAllQuizCategories) {
            if (other != cat && !(next.at(other) == qs.at(other))) return "category isolation broken";
        }
        const auto& before = qs.at(cat);
        const auto& after = next.at(cat);
        if (after.difficulty < kMinDifficulty || after.difficulty > kMaxDifficulty) return "difficulty out of range";
        if (after.streak < 0) return "negative streak";
        if (ok) {
            if (after.streak != before.streak + 1) return "streak did not advance";
            if (after.difficulty != std::min(kMaxDifficulty, before.difficulty + (after.streak % 2 == 0)))
                return "difficulty did not follow the streak";
        } else {
            if (after.streak != 0) return "streak not reset";
            if (after.difficulty != std::max(kMinDifficulty, before.difficulty - 1)) return "difficulty not lowered";
        }
        trace.push_back({q, next});
        qs = next;
    }
    if (replay) {
        QuizState again;
        std::mt19937_64 r(base);
        for (const auto& [q, state] : trace) {
            const auto [cat, seed, try_correct] = draw(r);
            const auto q2 = next_question(again, cat, seed);
            if (!(q2 == q)) return "question not reproduced from its seed";
            again = update_difficulty(again, cat, grade(q2, try_correct ? correct_answer(q2) : wrong_answer(q2)).correct);
            if (!(again == state)) return "state not reproduced from its seed";
        }
    }
    return {};
}

// Session after up to 40 random user operations; operations the model
// rejects are skipped.
inline pzx::Session random_session(std::mt19937_64& rng, int n) {
    using namespace pzx;
    Session s = create_session("s" + std::to_string(n));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int ops = static_cast<int>(rng() % 40);
    for (int i = 0; i < ops; ++i) {
        try {
            switch (rng() % 9) {
            case 0: add_system(s, {static_cast<TemplateId>(rng() % 6), {}}); break;
            case 1: {
                const char* exprs[] = {"a/(1+b*s)^2", "(1+s)/(s^2+0.3*s+1)*exp(-0.37*s)", "1/(s*(1+s))",
                                       "2.5e-3/(1+1.5E+2*s)", "k*(s+z)/(s^3+2*s^2+3*s+4)"};
                add_system(s, {{}, exprs[rng() % 5]});
                break;
            }
            case 2:
                if (!s.systems.empty()) remove_system(s, s.systems[rng() % s.systems.size()].id);
                break;
            case 3:
                if (!s.systems.empty()) {
                    auto& e = s.systems[rng() % s.systems.size()];
                    if (e.instance && e.kind == SystemKind::template_system) {
                        update_parameter(s, e.id, e.instance->params.begin()->first, 0.1 + 3.0 * u(rng));
                    }
                }
                break;
            case 4:
                if (!s.systems.empty()) {
                    const auto& e = s.systems[rng() % s.systems.size()];
                    move_pole(s, e.id, 0, {-0.1 - 5 * u(rng), (rng() % 2) * u(rng)});
                }
                break;
            case 5: apply_event(s, {kAllEventKinds[rng() % kAllEventKinds.size()], {{"k", "v"}}}); break;
            case 6: next_quiz_question(s, std::nullopt); break;
            case 7:
                if (s.pending_question) {
                    const auto& q = *s.pending_question;
                    QuizAnswer a;
                    if (q.category == QuizCategory::click_nyquist_angle) a.point = std::polar(1.0, u(rng) * 6);
                    else if (q.category == QuizCategory::click_frequency || q.category == QuizCategory::click_time)
                        a.value = q.target * (0.5 + u(rng));
                    else a.choice = static_cast<int>(rng() % q.systems.size());
                    answer_quiz(s, a);
                }
                break;
            case 8: set_input_kind(s, rng() % 2 ? InputKind::step : InputKind::impulse); break;
            }
        } catch (const Error&) {
        }
    }
    return s;
}

// ---- parser corpus ------------------------------------------------------------

struct CorpusEntry {
    std::string expression;
    pzx::ParameterEnv env;
};

inline std::string render_list(const pzx::Polynomial& p) {
    std::string out = "[";
    for (std::size_t k = 0; k < p.coefficients().size(); ++k) {
        out += (k ? ", " : "") + pzx::format_number(p.coefficients()[k]);
    }
    return out + "]";
}

inline std::string kind_name(pzx::ExpressionError::Kind k) {
    using K = pzx::ExpressionError::Kind;
    switch (k) {
    case K::syntax: return "syntax";
    case K::unbound_symbol: return "unbound_symbol";
    case K::unsupported_delay: return "unsupported_delay";
    case K::non_rational: return "non_rational";
    case K::zero_denominator: return "zero_denominator";
    }
    return "?";
}

inline pzx::ParameterEnv parse_bindings(const std::string& text) {
    pzx::ParameterEnv env;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        env[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return env;
}

inline std::vector<CorpusEntry> load_corpus(const std::string& golden_dir) {
    std::stringstream in(oracle::read_file(golden_dir + "/parser_corpus.txt"));
    std::vector<CorpusEntry> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        out.push_back({line.substr(0, tab), tab == std::string::npos ? pzx::ParameterEnv{} : parse_bindings(line.substr(tab + 1))});
    }
    return out;
}

inline std::string render_outcome(const CorpusEntry& e) {
    try {
        const auto tf = pzx::parse_transfer_function(e.expression, e.env);
        return "num=" + render_list(tf.num) + " den=" + render_list(tf.den) + " delay=" + pzx::format_number(tf.delay);
    } catch (const pzx::ExpressionError& err) {
        return "error " + kind_name(err.kind()) + " at " + std::to_string(err.offset()) + ": " + err.detail();
    }
}

struct RenderedCorpus {
    std::string text;
    int entries = 0;
    int errors = 0;
};

inline RenderedCorpus render_corpus(const std::vector<CorpusEntry>& corpus) {
    RenderedCorpus r;
    for (const auto& e : corpus) {
        const auto line = render_outcome(e);
        r.errors += line.rfind("error", 0) == 0;
        ++r.entries;
        r.text += e.expression + "\n  " + line + "\n";
    }
    return r;
}

} // namespace fixture
