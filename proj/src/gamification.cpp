#include "pzx/gamification.hpp"

#include "pzx/error.hpp"
#include "pzx/expression.hpp"
#include "pzx/freq_analysis.hpp"
#include "pzx/time_response.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

namespace pzx {

namespace {

template <class E, std::size_t N>
E parse_enum(std::string_view text, const std::array<E, N>& all, const char* what) {
    for (E e : all) {
        if (to_string(e) == text) {
            return e;
        }
    }
    throw DomainError(std::string("unknown ") + what + " '" + std::string(text) + "'");
}

std::string fmt_g(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string fmt_f(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

double round_sig(double v, int digits) { return std::stod(fmt_g(v, digits)); }

// Portable draws on top of mt19937_64; the std distributions differ between
// standard libraries, which would break seed determinism across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double log_uniform(double lo, double hi) {
        return std::pow(10.0, uniform(std::log10(lo), std::log10(hi)));
    }
    /// Inclusive range.
    int integer(int lo, int hi) {
        const int span = hi - lo + 1;
        return lo + std::min(span - 1, static_cast<int>(uniform() * span));
    }
    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
};

// ---- catalogs --------------------------------------------------------------

std::vector<AchievementDef> build_achievements() {
    using K = EventKind;
    return {
        {"first_pole_drag", "Pole mover", K::pole_dragged, 1, 10},
        {"pole_drag_25", "Pole wrangler", K::pole_dragged, 25, 10},
        {"first_zero_drag", "Zero in", K::zero_dragged, 1, 10},
        {"bode_hover", "Reading the Bode plot", K::bode_hovered, 1, 10},
        {"nyquist_hover", "Around the Nyquist curve", K::nyquist_hovered, 1, 10},
        {"step_hover", "Tracing the step response", K::step_hovered, 1, 10},
        {"first_system", "System builder", K::system_added, 1, 10},
        {"five_systems", "Collector", K::system_added, 5, 10},
        {"remove_system", "Spring cleaning", K::system_removed, 1, 10},
        {"export_code", "Take it with you", K::code_exported, 1, 10},
        {"edit_expression", "Handwritten transfer function", K::expression_edited, 1, 10},
        {"first_assignment", "Assignment done", K::assignment_completed, 1, 10},
        {"first_quiz", "First answer", K::quiz_answered, 1, 10},
        {"quiz_20", "Quiz regular", K::quiz_answered, 20, 10},
        {"fullscreen", "Big picture", K::fullscreen_toggled, 1, 10},
        {"input_switch", "Kick it", K::input_kind_changed, 1, 10},
    };
}

std::vector<AssignmentDef> build_assignments() {
    return {
        {"pole_at_half", TemplateId::g1, "Move the pole of the first-order system to s = -1/2.",
         Quantity::dominant_pole_re, Comparator::eq, -0.5, 0.02, false, std::nullopt,
         "The pole sits at -1/T_1, so T_1 = 2 s places it at -1/2. A pole closer to the imaginary axis "
         "means a slower response.",
         10},
        {"four_times_faster", TemplateId::g1,
         "Make the first-order system respond four times faster than a reference with T_1 = 1 s.",
         Quantity::speedup, Comparator::eq, 4.0, 0.05, true, 1.0,
         "Dividing the time constant by four moves the pole four times further into the left half plane; "
         "the step response now settles in a quarter of the time.",
         10},
        {"double_gain", TemplateId::g1, "Give the first-order system a static gain of 2.", Quantity::static_gain,
         Comparator::eq, 2.0, 0.02, false, std::nullopt,
         "The step response now settles at 2 and the low-frequency Bode magnitude sits at about 6 dB.", 10},
        {"half_damping", TemplateId::g3, "Set the damping of the complex pole pair to 0.5.", Quantity::damping_ratio,
         Comparator::eq, 0.5, 0.02, false, std::nullopt,
         "With zeta = 0.5 the poles lie on rays 60 degrees from the negative real axis and the step response "
         "overshoots by about 16%.",
         10},
        {"natural_frequency_5", TemplateId::g3, "Place the complex poles at a distance of 5 from the origin.",
         Quantity::natural_frequency, Comparator::eq, 5.0, 0.1, false, std::nullopt,
         "The distance from the origin is the natural frequency omega_0; the Bode resonance moves with it.", 10},
        {"phase_margin_60", TemplateId::g2, "Tune the two-pole system to a phase margin of at least 60 degrees.",
         Quantity::phase_margin_deg, Comparator::ge, 60.0, 0.5, false, std::nullopt,
         "A large phase margin means the loop can tolerate extra lag before it becomes unstable.", 10},
        {"delay_margin_30", TemplateId::g4,
         "Shorten the time delay until the phase margin is at least 30 degrees.", Quantity::phase_margin_deg,
         Comparator::ge, 30.0, 0.5, false, std::nullopt,
         "Every second of delay removes omega radians of phase at frequency omega, so delay eats into the "
         "margin at the crossover frequency.",
         10},
    };
}

// ---- quiz generators ---------------------------------------------------------

TransferFunction random_g1(Rng& rng) {
    return instantiate({TemplateId::g1, {{"k_1", round_sig(rng.uniform(0.5, 3.0), 2)},
                                         {"T_1", round_sig(rng.log_uniform(0.1, 5.0), 2)}}});
}

TransferFunction random_g2(Rng& rng) {
    const double t2 = round_sig(rng.log_uniform(0.5, 5.0), 2);
    const double t3 = round_sig(t2 * rng.uniform(0.05, 0.5), 2);
    return instantiate({TemplateId::g2, {{"k_2", round_sig(rng.uniform(0.5, 3.0), 2)}, {"T_2", t2}, {"T_3", t3}}});
}

TransferFunction random_g3(Rng& rng, double zeta_lo, double zeta_hi) {
    return instantiate({TemplateId::g3, {{"k_3", round_sig(rng.uniform(0.5, 3.0), 2)},
                                         {"omega_0", round_sig(rng.log_uniform(0.5, 5.0), 2)},
                                         {"zeta", round_sig(rng.uniform(zeta_lo, zeta_hi), 2)}}});
}

TransferFunction random_g5(Rng& rng) {
    const double t6 = round_sig(rng.log_uniform(0.5, 5.0), 2);
    return instantiate({TemplateId::g5, {{"k_4", round_sig(rng.uniform(0.5, 3.0), 2)},
                                         {"T_6", t6},
                                         {"T_7", round_sig(t6 * rng.uniform(0.05, 0.5), 2)},
                                         {"T_8", round_sig(rng.log_uniform(0.1, 3.0), 2)}}});
}

TransferFunction random_plain(Rng& rng) {
    switch (rng.integer(0, 2)) {
    case 0:
        return random_g1(rng);
    case 1:
        return random_g2(rng);
    default:
        return random_g3(rng, 0.1, 0.9);
    }
}

// Unit-gain system with n poles, all in the left half plane.
TransferFunction random_with_poles(Rng& rng, int n) {
    std::vector<Complex> roots;
    int left = n;
    if (n >= 2 && rng.coin()) {
        const double re = -round_sig(rng.uniform(0.2, 2.0), 2);
        const double im = round_sig(rng.uniform(0.5, 3.0), 2);
        roots.emplace_back(re, im);
        roots.emplace_back(re, -im);
        left -= 2;
    }
    for (int i = 0; i < left; ++i) {
        roots.emplace_back(-round_sig(rng.uniform(0.2, 5.0), 2), 0.0);
    }
    const Polynomial den = from_roots(roots, 1.0);
    return {Polynomial{den[0]}, den, 0.0};
}

TransferFunction odd_candidate(Rng& rng, OddProperty prop, bool value, int d) {
    const bool similar = d >= 3;
    switch (prop) {
    case OddProperty::stable:
        if (value) {
            return random_plain(rng);
        } else {
            const double p = similar ? rng.uniform(0.05, 0.3) : rng.uniform(0.5, 3.0);
            const std::vector<Complex> roots{{round_sig(p, 2), 0.0}, {-round_sig(rng.uniform(0.5, 3.0), 2), 0.0}};
            const Polynomial den = from_roots(roots, 1.0);
            return {Polynomial{std::abs(den[0])}, den, 0.0};
        }
    case OddProperty::oscillatory:
        if (value) {
            return random_g3(rng, similar ? 0.5 : 0.05, similar ? 0.9 : 0.5);
        }
        if (similar) {
            return random_g3(rng, 1.1, 2.0);
        }
        return rng.coin() ? random_g1(rng) : random_g2(rng);
    case OddProperty::has_zero:
        if (value) {
            return random_g5(rng);
        }
        return similar ? random_g2(rng) : random_plain(rng);
    case OddProperty::has_delay:
        if (value) {
            return instantiate({TemplateId::g4, {{"L", round_sig(rng.uniform(0.2, 2.0), 2)}}});
        }
        if (similar) {
            return {Polynomial{3.0}, Polynomial{1.0, 1.0}, 0.0};
        }
        return random_plain(rng);
    }
    throw DomainError("unknown property");
}

std::string property_phrase(OddProperty p, bool value) {
    switch (p) {
    case OddProperty::stable:
        return value ? "is stable" : "is unstable";
    case OddProperty::oscillatory:
        return value ? "has complex poles" : "has only real poles";
    case OddProperty::has_zero:
        return value ? "has a zero" : "has no zeros";
    case OddProperty::has_delay:
        return value ? "has a time delay" : "has no time delay";
    }
    return {};
}

std::string pole_word(int n) { return n == 1 ? "pole" : "poles"; }

QuizQuestion make_click_frequency(Rng& rng, int d) {
    QuizQuestion q;
    q.category = QuizCategory::click_frequency;
    q.difficulty = d;
    q.target = round_sig(std::pow(10.0, rng.uniform(-2.0, 3.0)), 2);
    q.tolerance = frequency_tolerance(d);
    q.systems.push_back(random_plain(rng));
    q.prompt = "Click the Bode plot at the frequency omega = " + fmt_g(q.target) + " rad/s.";
    return q;
}

QuizQuestion make_click_time(Rng& rng, int d) {
    QuizQuestion q;
    q.category = QuizCategory::click_time;
    q.difficulty = d;
    const TransferFunction tf = random_g1(rng);
    q.target = tf.den[1];
    q.time_span = default_time_grid(tf).times.back();
    q.tolerance = time_tolerance(d, q.time_span);
    q.systems.push_back(tf);
    q.prompt = "Click the time at which the step response of " + to_expression(tf) +
               " reaches 63% of its final value.";
    return q;
}

QuizQuestion make_click_angle(Rng& rng, int d) {
    QuizQuestion q;
    q.category = QuizCategory::click_nyquist_angle;
    q.difficulty = d;
    q.target = -5.0 * rng.integer(2, 34);
    q.tolerance = angle_tolerance(d);
    q.systems.push_back(rng.coin() ? random_g2(rng) : random_g3(rng, 0.2, 0.9));
    q.prompt = "Click the Nyquist curve where the phase is " + fmt_g(q.target) + " degrees.";
    return q;
}

QuizQuestion make_click_complexity(Rng& rng, int d) {
    QuizQuestion q;
    q.category = QuizCategory::click_complexity;
    q.difficulty = d;
    const int options = d + 1;
    std::vector<int> counts;
    if (d <= 2) {
        std::vector<int> pool{1, 2, 3, 4, 5, 6};
        for (int i = 0; i < options; ++i) {
            const int j = rng.integer(0, static_cast<int>(pool.size()) - 1);
            counts.push_back(pool[static_cast<std::size_t>(j)]);
            pool.erase(pool.begin() + j);
        }
    } else {
        const int start = rng.integer(1, 7 - options);
        for (int i = 0; i < options; ++i) {
            counts.push_back(start + i);
        }
        // Shuffle so the answer position carries no information.
        for (int i = options - 1; i > 0; --i) {
            std::swap(counts[static_cast<std::size_t>(i)], counts[static_cast<std::size_t>(rng.integer(0, i))]);
        }
    }
    const int answer = rng.integer(0, options - 1);
    for (int n : counts) {
        q.systems.push_back(random_with_poles(rng, n));
    }
    q.answer_index = answer;
    q.target = counts[static_cast<std::size_t>(answer)];
    q.prompt = "Click the system with exactly " + fmt_g(q.target) + " " + pole_word(static_cast<int>(q.target)) + ".";
    return q;
}

QuizQuestion make_odd_one_out(Rng& rng, int d) {
    QuizQuestion q;
    q.category = QuizCategory::odd_one_out;
    q.difficulty = d;
    const auto prop = static_cast<OddProperty>(rng.integer(0, 3));
    const bool majority = rng.coin();
    const int odd = rng.integer(0, 3);
    for (int i = 0; i < 4; ++i) {
        q.systems.push_back(odd_candidate(rng, prop, i == odd ? !majority : majority, d));
    }
    q.property = prop;
    q.answer_index = odd;
    q.target = odd;
    q.prompt = "Three of these systems have something in common. Click the odd one out.";
    return q;
}

Complex dominant_pole(const TransferFunction& tf, bool& found) {
    const auto ps = poles(tf);
    found = !ps.empty();
    if (!found) {
        return {};
    }
    return *std::max_element(ps.begin(), ps.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) {
            return a.real() < b.real();
        }
        return std::abs(a.imag()) < std::abs(b.imag());
    });
}

} // namespace

// ---- enum names ----------------------------------------------------------------

std::string to_string(EventKind kind) {
    switch (kind) {
    case EventKind::pole_dragged: return "pole_dragged";
    case EventKind::zero_dragged: return "zero_dragged";
    case EventKind::bode_hovered: return "bode_hovered";
    case EventKind::nyquist_hovered: return "nyquist_hovered";
    case EventKind::step_hovered: return "step_hovered";
    case EventKind::system_added: return "system_added";
    case EventKind::system_removed: return "system_removed";
    case EventKind::code_exported: return "code_exported";
    case EventKind::expression_edited: return "expression_edited";
    case EventKind::assignment_completed: return "assignment_completed";
    case EventKind::quiz_answered: return "quiz_answered";
    case EventKind::fullscreen_toggled: return "fullscreen_toggled";
    case EventKind::input_kind_changed: return "input_kind_changed";
    }
    return "?";
}

EventKind parse_event_kind(std::string_view text) { return parse_enum(text, kAllEventKinds, "event kind"); }

std::string to_string(BadgeCategory c) {
    switch (c) {
    case BadgeCategory::achievements: return "achievements";
    case BadgeCategory::assignments: return "assignments";
    case BadgeCategory::quiz: return "quiz";
    }
    return "?";
}

std::string to_string(Badge b) {
    switch (b) {
    case Badge::none: return "none";
    case Badge::bronze: return "bronze";
    case Badge::silver: return "silver";
    case Badge::gold: return "gold";
    }
    return "?";
}

BadgeCategory parse_badge_category(std::string_view text) {
    return parse_enum(text, kAllBadgeCategories, "badge category");
}

std::string to_string(Quantity q) {
    switch (q) {
    case Quantity::dominant_pole_re: return "dominant_pole_re";
    case Quantity::dominant_pole_im: return "dominant_pole_im";
    case Quantity::dominant_time_constant: return "dominant_time_constant";
    case Quantity::speedup: return "speedup";
    case Quantity::static_gain: return "static_gain";
    case Quantity::damping_ratio: return "damping_ratio";
    case Quantity::natural_frequency: return "natural_frequency";
    case Quantity::delay: return "delay";
    case Quantity::phase_margin_deg: return "phase_margin_deg";
    case Quantity::gain_margin_db: return "gain_margin_db";
    }
    return "?";
}

std::string to_string(Comparator c) {
    switch (c) {
    case Comparator::eq: return "eq";
    case Comparator::le: return "le";
    case Comparator::ge: return "ge";
    }
    return "?";
}

Quantity parse_quantity(std::string_view text) {
    static constexpr std::array all{Quantity::dominant_pole_re,  Quantity::dominant_pole_im,
                                    Quantity::dominant_time_constant, Quantity::speedup,
                                    Quantity::static_gain,       Quantity::damping_ratio,
                                    Quantity::natural_frequency, Quantity::delay,
                                    Quantity::phase_margin_deg,  Quantity::gain_margin_db};
    return parse_enum(text, all, "quantity");
}

Comparator parse_comparator(std::string_view text) {
    static constexpr std::array all{Comparator::eq, Comparator::le, Comparator::ge};
    return parse_enum(text, all, "comparator");
}

std::string to_string(QuizCategory c) {
    switch (c) {
    case QuizCategory::click_frequency: return "click_frequency";
    case QuizCategory::click_time: return "click_time";
    case QuizCategory::click_nyquist_angle: return "click_nyquist_angle";
    case QuizCategory::click_complexity: return "click_complexity";
    case QuizCategory::odd_one_out: return "odd_one_out";
    }
    return "?";
}

QuizCategory parse_quiz_category(std::string_view text) {
    return parse_enum(text, kAllQuizCategories, "quiz category");
}

std::string to_string(OddProperty p) {
    switch (p) {
    case OddProperty::stable: return "stable";
    case OddProperty::oscillatory: return "oscillatory";
    case OddProperty::has_zero: return "has_zero";
    case OddProperty::has_delay: return "has_delay";
    }
    return "?";
}

OddProperty parse_odd_property(std::string_view text) {
    static constexpr std::array all{OddProperty::stable, OddProperty::oscillatory, OddProperty::has_zero,
                                    OddProperty::has_delay};
    return parse_enum(text, all, "property");
}

// ---- achievements and progress ------------------------------------------------

const std::vector<AchievementDef>& achievement_catalog() {
    static const std::vector<AchievementDef> defs = build_achievements();
    return defs;
}

void validate(const std::vector<AchievementDef>& defs) {
    std::set<std::string> ids;
    for (const auto& d : defs) {
        if (d.id.empty()) {
            throw DomainError("achievement id must not be empty");
        }
        if (!ids.insert(d.id).second) {
            throw DomainError("duplicate achievement id '" + d.id + "'");
        }
        if (d.count < 1 || d.points < 1) {
            throw DomainError("achievement '" + d.id + "' needs a positive count and positive points");
        }
    }
}

ProgressState award(const ProgressState& progress, BadgeCategory category, int points) {
    if (points < 0) {
        throw DomainError("points must be nonnegative");
    }
    ProgressState next = progress;
    next.points += points;
    next.category_points[category] += points;
    next.level = next.points / kPointsPerLevel;
    return next;
}

RecordResult record_event(const ProgressState& progress, const std::vector<AchievementDef>& defs, const Event& e) {
    RecordResult r{progress, {}};
    const int seen = ++r.state.event_counts[e.kind];
    int gained = 0;
    for (const auto& def : defs) {
        if (def.trigger != e.kind || seen < def.count) {
            continue;
        }
        if (std::find(r.state.unlocked.begin(), r.state.unlocked.end(), def.id) != r.state.unlocked.end()) {
            continue;
        }
        r.state.unlocked.push_back(def.id);
        r.newly_unlocked.push_back(def.id);
        gained += def.points;
    }
    if (gained > 0) {
        r.state = award(r.state, BadgeCategory::achievements, gained);
    }
    return r;
}

Badge badge_for(int points, int attainable) {
    if (attainable <= 0 || points <= 0) {
        return Badge::none;
    }
    // Integer comparisons keep the boundaries exact.
    const long long p = points;
    const long long a = attainable;
    if (p >= a) {
        return Badge::gold;
    }
    if (10 * p >= 6 * a) {
        return Badge::silver;
    }
    if (10 * p >= 3 * a) {
        return Badge::bronze;
    }
    return Badge::none;
}

std::map<BadgeCategory, Badge> badge_progress(const ProgressState& ps, const BadgeScale& scale) {
    const auto pts = [&](BadgeCategory c) {
        const auto it = ps.category_points.find(c);
        return it == ps.category_points.end() ? 0 : it->second;
    };
    return {
        {BadgeCategory::achievements, badge_for(pts(BadgeCategory::achievements), scale.achievements)},
        {BadgeCategory::assignments, badge_for(pts(BadgeCategory::assignments), scale.assignments)},
        {BadgeCategory::quiz, badge_for(pts(BadgeCategory::quiz), scale.quiz)},
    };
}

// ---- assignments -------------------------------------------------------------

const std::vector<AssignmentDef>& assignment_catalog() {
    static const std::vector<AssignmentDef> defs = build_assignments();
    return defs;
}

void validate(const AssignmentDef& def) {
    if (def.id.empty()) {
        throw DomainError("assignment id must not be empty");
    }
    if (!(def.tolerance > 0.0) || !std::isfinite(def.tolerance)) {
        throw DomainError("assignment '" + def.id + "' needs a positive tolerance");
    }
    if (!std::isfinite(def.target)) {
        throw DomainError("assignment '" + def.id + "' needs a finite target");
    }
    if (def.quantity == Quantity::speedup && !(def.reference && *def.reference > 0.0)) {
        throw DomainError("assignment '" + def.id + "' needs a positive reference time constant");
    }
    if (def.points < 0) {
        throw DomainError("assignment '" + def.id + "' has negative points");
    }
}

double measure(Quantity q, const TransferFunction& tf, std::optional<double> reference) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    bool found = false;
    switch (q) {
    case Quantity::static_gain:
        return static_gain(tf);
    case Quantity::delay:
        return tf.delay;
    case Quantity::phase_margin_deg:
        return margins(tf).phase_margin_deg.value_or(nan);
    case Quantity::gain_margin_db:
        return margins(tf).gm_db;
    default:
        break;
    }
    const Complex p = dominant_pole(tf, found);
    if (!found) {
        return nan;
    }
    switch (q) {
    case Quantity::dominant_pole_re:
        return p.real();
    case Quantity::dominant_pole_im:
        return std::abs(p.imag());
    case Quantity::dominant_time_constant:
        return p.real() < 0.0 ? -1.0 / p.real() : nan;
    case Quantity::speedup:
        return p.real() < 0.0 && reference ? *reference * -p.real() : nan;
    case Quantity::damping_ratio:
        return std::abs(p) > 0.0 ? -p.real() / std::abs(p) : nan;
    case Quantity::natural_frequency:
        return std::abs(p);
    default:
        return nan;
    }
}

AssignmentResult check_assignment(const AssignmentDef& def, const SystemSnapshot& snapshot) {
    validate(def);
    if (!snapshot.instance || snapshot.instance->id != def.group) {
        throw DomainError("assignment '" + def.id + "' applies to " + to_string(def.group) + " systems only");
    }
    const double m = measure(def.quantity, snapshot.tf, def.reference);
    const double tol = def.relative_tolerance ? def.tolerance * std::abs(def.target) : def.tolerance;
    bool passed = false;
    if (std::isfinite(m) || (std::isinf(m) && def.comparator != Comparator::eq)) {
        switch (def.comparator) {
        case Comparator::eq:
            passed = std::abs(m - def.target) <= tol;
            break;
        case Comparator::le:
            passed = m <= def.target + tol;
            break;
        case Comparator::ge:
            passed = m >= def.target - tol;
            break;
        }
    }
    AssignmentResult r{passed, m, std::nullopt};
    if (passed) {
        r.explanation = def.explanation;
    }
    return r;
}

// ---- quiz ---------------------------------------------------------------------

void validate(const QuizState& qs) {
    for (const auto& r : qs.records) {
        if (r.difficulty < kMinDifficulty || r.difficulty > kMaxDifficulty || r.streak < 0) {
            throw DomainError("quiz state out of range");
        }
    }
}

bool has_property(const TransferFunction& tf, OddProperty p) {
    switch (p) {
    case OddProperty::stable: {
        const auto ps = poles(tf);
        return std::all_of(ps.begin(), ps.end(), [](Complex z) { return z.real() < 0.0; });
    }
    case OddProperty::oscillatory: {
        const auto ps = poles(tf);
        return std::any_of(ps.begin(), ps.end(), [](Complex z) { return z.imag() != 0.0; });
    }
    case OddProperty::has_zero:
        return tf.num.degree() >= 1;
    case OddProperty::has_delay:
        return tf.delay > 0.0;
    }
    return false;
}

double frequency_tolerance(int d) { return 0.40 - 0.06 * d; }
double time_tolerance(int d, double span) { return (0.10 - 0.015 * d) * span; }
double angle_tolerance(int d) { return 28.0 - 4.0 * d; }

QuizQuestion next_question(const QuizState& qs, std::optional<QuizCategory> category, std::uint64_t seed) {
    validate(qs);
    Rng rng(seed);
    const QuizCategory c =
        category ? *category : kAllQuizCategories[static_cast<std::size_t>(rng.integer(0, kAllQuizCategories.size() - 1))];
    const int d = qs.at(c).difficulty;
    switch (c) {
    case QuizCategory::click_frequency:
        return make_click_frequency(rng, d);
    case QuizCategory::click_time:
        return make_click_time(rng, d);
    case QuizCategory::click_nyquist_angle:
        return make_click_angle(rng, d);
    case QuizCategory::click_complexity:
        return make_click_complexity(rng, d);
    case QuizCategory::odd_one_out:
        return make_odd_one_out(rng, d);
    }
    throw DomainError("unknown quiz category");
}

GradeResult grade(const QuizQuestion& q, const QuizAnswer& answer) {
    switch (q.category) {
    case QuizCategory::click_frequency: {
        if (!answer.value || !(*answer.value > 0.0) || !std::isfinite(*answer.value)) {
            throw DomainError("click_frequency expects a positive clicked frequency");
        }
        const double offset = std::log10(*answer.value / q.target);
        if (std::abs(offset) <= q.tolerance) {
            return {true, "Correct: omega = " + fmt_g(*answer.value) + " rad/s is " + fmt_f(std::abs(offset), 2) +
                              " decades from the target."};
        }
        return {false, "You clicked omega = " + fmt_g(*answer.value) + " rad/s, which is " +
                           fmt_f(std::abs(offset), 1) + " decades " + (offset > 0.0 ? "above" : "below") +
                           " the target omega = " + fmt_g(q.target) + " rad/s."};
    }
    case QuizCategory::click_time: {
        if (!answer.value || !(*answer.value >= 0.0) || !std::isfinite(*answer.value)) {
            throw DomainError("click_time expects a nonnegative clicked time");
        }
        const double diff = *answer.value - q.target;
        if (std::abs(diff) <= q.tolerance) {
            return {true, "Correct: the step response reaches 63% of its final value at t = " + fmt_g(q.target) +
                              " s, which is the time constant."};
        }
        return {false, "You clicked t = " + fmt_g(*answer.value) + " s, " + fmt_g(std::abs(diff)) + " s " +
                           (diff > 0.0 ? "later" : "earlier") + " than the target t = " + fmt_g(q.target) +
                           " s. A first-order step response reaches 63% of its final value after one time constant."};
    }
    case QuizCategory::click_nyquist_angle: {
        if (!answer.point || std::abs(*answer.point) == 0.0 || !std::isfinite(answer.point->real()) ||
            !std::isfinite(answer.point->imag())) {
            throw DomainError("click_nyquist_angle expects a nonzero clicked point");
        }
        const double angle = std::arg(*answer.point) * 180.0 / std::numbers::pi;
        const double err = wrap_degrees(angle - q.target);
        if (std::abs(err) <= q.tolerance) {
            return {true, "Correct: the clicked point lies at " + fmt_g(angle) + " degrees."};
        }
        return {false, "The clicked point lies at " + fmt_g(angle) + " degrees, " + fmt_g(std::abs(err)) +
                           " degrees away from the target angle " + fmt_g(q.target) +
                           " degrees. The angle is measured from the positive real axis."};
    }
    case QuizCategory::click_complexity:
    case QuizCategory::odd_one_out: {
        const int n = static_cast<int>(q.systems.size());
        if (!answer.choice || *answer.choice < 0 || *answer.choice >= n || !q.answer_index) {
            throw DomainError(to_string(q.category) + " expects a selected system index in [0, " +
                              std::to_string(n) + ")");
        }
        const int chosen = *answer.choice;
        const TransferFunction& sel = q.systems[static_cast<std::size_t>(chosen)];
        if (q.category == QuizCategory::click_complexity) {
            const int count = sel.den.degree();
            const int target = static_cast<int>(q.target);
            if (count == target) {
                return {true, "Correct: that system has " + std::to_string(count) + " " + pole_word(count) + "."};
            }
            return {false, "The selected system has " + std::to_string(count) + " " + pole_word(count) +
                               "; the target was " + std::to_string(target) + " " + pole_word(target) +
                               ". Count the crosses in the pole-zero map or the denominator degree."};
        }
        const OddProperty prop = *q.property;
        const int odd = *q.answer_index;
        const bool odd_value = has_property(q.systems[static_cast<std::size_t>(odd)], prop);
        if (chosen == odd) {
            return {true, "Correct: system " + std::to_string(chosen + 1) + " is the only one that " +
                              property_phrase(prop, odd_value) + "."};
        }
        return {false, "System " + std::to_string(chosen + 1) + " " + property_phrase(prop, !odd_value) +
                           " like two of the others; system " + std::to_string(odd + 1) +
                           " is the odd one out because it " + property_phrase(prop, odd_value) + "."};
    }
    }
    throw DomainError("unknown quiz category");
}

QuizState update_difficulty(const QuizState& qs, QuizCategory category, bool correct) {
    QuizState next = qs;
    CategoryRecord& r = next.at(category);
    if (correct) {
        ++r.streak;
        if (r.streak % 2 == 0) {
            r.difficulty = std::min(kMaxDifficulty, r.difficulty + 1);
        }
    } else {
        r.difficulty = std::max(kMinDifficulty, r.difficulty - 1);
        r.streak = 0;
    }
    return next;
}

} // namespace pzx
