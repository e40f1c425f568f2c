#include "pzx/session.hpp"

#include "pzx/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pzx {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

SystemEntry template_entry(Session& s, const TemplateInstance& inst, std::string expression) {
    SystemEntry e;
    e.id = "sys" + std::to_string(s.next_system_number);
    e.color = (s.next_system_number - 1) % kPaletteSize;
    ++s.next_system_number;
    e.kind = SystemKind::template_system;
    e.expression = std::move(expression);
    e.instance = inst;
    e.tf = instantiate(inst);
    return e;
}

std::vector<std::string> record(Session& s, EventKind kind, std::map<std::string, std::string> payload = {}) {
    return apply_event(s, Event{kind, std::move(payload)});
}

void append(std::vector<std::string>& into, const std::vector<std::string>& more) {
    into.insert(into.end(), more.begin(), more.end());
}

void require_left_half_plane(Complex p) {
    if (!(p.real() < 0.0)) {
        throw DomainError("pole must lie in the open left half plane");
    }
}

void require_real(Complex p, const std::string& what) {
    if (p.imag() != 0.0) {
        throw DomainError(what + " must be real");
    }
}

// Name among `names` whose pole -1/T lies closest to `old`.
const char* closest_time_constant(const TemplateInstance& inst, std::initializer_list<const char*> names, Complex old) {
    const char* best = *names.begin();
    double best_dist = INFINITY;
    for (const char* n : names) {
        const double d = std::abs(Complex{-1.0 / inst.at(n), 0.0} - old);
        if (d < best_dist) {
            best_dist = d;
            best = n;
        }
    }
    return best;
}

// Replaces root `index` by `to`, mirroring the conjugate partner, and rebuilds
// the polynomial keeping its constant term (or, when that vanishes, its
// leading coefficient).
Polynomial move_root(const Polynomial& p, std::size_t index, Complex to, const char* what) {
    if (p.degree() < 1) {
        throw DomainError(std::string("system has no ") + what + "s");
    }
    RootSet rs = roots(p);
    sort_canonical(rs);
    if (index >= rs.size()) {
        throw DomainError(std::string(what) + " index out of range");
    }
    if (!std::isfinite(to.real()) || !std::isfinite(to.imag())) {
        throw DomainError(std::string(what) + " location must be finite");
    }
    const Complex old = rs[index];
    if (old.imag() == 0.0) {
        if (to.imag() != 0.0) {
            throw DomainError(std::string("a real ") + what + " can only move along the real axis");
        }
        rs[index] = to;
    } else {
        std::size_t partner = rs.size();
        double best = INFINITY;
        for (std::size_t j = 0; j < rs.size(); ++j) {
            const double d = std::abs(rs[j] - std::conj(old));
            if (j != index && d < best) {
                best = d;
                partner = j;
            }
        }
        rs[index] = to;
        rs[partner] = std::conj(to);
    }
    Polynomial fresh = from_roots(rs, 1.0);
    if (p[0] != 0.0 && fresh[0] != 0.0) {
        return scale(fresh, p[0] / fresh[0]);
    }
    return scale(fresh, p.leading() / fresh.leading());
}

TemplateInstance move_template_pole(const TemplateInstance& inst, const RootSet& ps, std::size_t index, Complex to) {
    TemplateInstance next = inst;
    const Complex old = ps[index];
    switch (inst.id) {
    case TemplateId::g1:
        require_real(to, "first-order pole");
        require_left_half_plane(to);
        next.params["T_1"] = -1.0 / to.real();
        break;
    case TemplateId::g2:
    case TemplateId::g5: {
        require_real(to, "the poles of " + to_string(inst.id));
        require_left_half_plane(to);
        const bool g2 = inst.id == TemplateId::g2;
        const char* name = g2 ? closest_time_constant(inst, {"T_2", "T_3"}, old)
                              : closest_time_constant(inst, {"T_6", "T_7"}, old);
        next.params[name] = -1.0 / to.real();
        break;
    }
    case TemplateId::g3: {
        if (to.real() > 0.0) {
            throw DomainError("pole must not lie in the right half plane");
        }
        if (to.imag() == 0.0 && old.imag() == 0.0) {
            // Overdamped: the other real pole stays put.
            const double other = ps[1 - index].real();
            if (!(to.real() < 0.0)) {
                throw DomainError("pole must lie in the open left half plane");
            }
            const double w0 = std::sqrt(to.real() * other);
            next.params["omega_0"] = w0;
            next.params["zeta"] = -(to.real() + other) / (2.0 * w0);
        } else {
            const double r = std::abs(to);
            if (!(r > 0.0)) {
                throw DomainError("pole must not sit at the origin");
            }
            next.params["omega_0"] = r;
            next.params["zeta"] = -to.real() / r;
        }
        break;
    }
    case TemplateId::g4:
        throw DomainError("the pole of G4 is fixed; only the delay L can change");
    case TemplateId::g6:
        require_real(to, "the poles of G6");
        require_left_half_plane(to);
        next.params["T_5"] = -1.0 / to.real();
        break;
    }
    validate(next);
    return next;
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Unwrapped phase at omega, consistent with the Bode pane started at 1e-2.
double bode_phase_at(const TransferFunction& tf, double omega) {
    if (omega <= 1e-2) {
        return std::arg(evaluate(tf, Complex{0.0, omega})) * kRadToDeg;
    }
    const FrequencyResponse fr = freq_response(tf, densify_for_delay(log_grid(1e-2, omega, 200), tf.delay));
    return fr.phase_deg.back();
}

SystemAtOmega system_at(const SystemEntry& e, double omega) {
    const Complex h = evaluate(e.tf, Complex{0.0, omega});
    return {e.id, 20.0 * std::log10(std::abs(h)), bode_phase_at(e.tf, omega), h.real(), h.imag()};
}

} // namespace

const SystemEntry& Session::system(std::string_view sid) const {
    for (const auto& e : systems) {
        if (e.id == sid) {
            return e;
        }
    }
    throw NotFoundError("unknown system '" + std::string(sid) + "'");
}

SystemEntry& Session::system(std::string_view sid) {
    return const_cast<SystemEntry&>(std::as_const(*this).system(sid));
}

Session create_session(std::string id) {
    Session s;
    s.id = std::move(id);
    for (TemplateId t : {TemplateId::g1, TemplateId::g2, TemplateId::g3, TemplateId::g4}) {
        s.systems.push_back(template_entry(s, default_instance(t), template_info(t).expression));
    }
    s.selected = s.systems.front().id;
    return s;
}

AddResult add_system(Session& s, const SystemSource& source) {
    if (s.systems.size() >= kMaxSystems) {
        throw DomainError("a session holds at most " + std::to_string(kMaxSystems) + " systems");
    }
    if (source.template_id.has_value() == source.expression.has_value()) {
        throw DomainError("give exactly one of template or expression");
    }
    AddResult r;
    if (source.template_id) {
        const TemplateId t = *source.template_id;
        s.systems.push_back(template_entry(s, default_instance(t), template_info(t).expression));
        r.system_id = s.systems.back().id;
        r.unlocked = record(s, EventKind::system_added, {{"system", r.system_id}});
    } else {
        const std::string& text = *source.expression;
        const ExprPtr expr = parse(text);
        ParameterEnv env;
        for (const auto& name : free_symbols(*expr)) {
            env[name] = 1.0;
        }
        const TransferFunction tf = normalize(*expr, env);
        std::optional<TemplateInstance> match = env.empty() ? match_template(tf) : std::nullopt;
        if (match) {
            s.systems.push_back(template_entry(s, *match, text));
        } else {
            SystemEntry e;
            e.id = "sys" + std::to_string(s.next_system_number);
            e.color = (s.next_system_number - 1) % kPaletteSize;
            ++s.next_system_number;
            e.kind = SystemKind::expression_system;
            e.expression = text;
            e.tf = tf;
            e.instance = match_template(tf);
            e.params = env;
            s.systems.push_back(std::move(e));
        }
        r.system_id = s.systems.back().id;
        r.unlocked = record(s, EventKind::system_added, {{"system", r.system_id}});
        append(r.unlocked, record(s, EventKind::expression_edited, {{"system", r.system_id}}));
    }
    if (s.selected.empty()) {
        s.selected = r.system_id;
    }
    return r;
}

std::vector<std::string> remove_system(Session& s, std::string_view id_view) {
    // The view may point into the entry about to be erased.
    const std::string system_id(id_view);
    const auto it = std::find_if(s.systems.begin(), s.systems.end(), [&](const auto& e) { return e.id == system_id; });
    if (it == s.systems.end()) {
        throw NotFoundError("unknown system '" + std::string(system_id) + "'");
    }
    s.systems.erase(it);
    if (s.selected == system_id) {
        s.selected = s.systems.empty() ? std::string{} : s.systems.front().id;
    }
    return record(s, EventKind::system_removed, {{"system", system_id}});
}

void update_parameter(Session& s, std::string_view system_id, const std::string& symbol, double value) {
    SystemEntry& e = s.system(system_id);
    const std::string name = canonical_symbol(symbol);
    if (!std::isfinite(value)) {
        throw DomainError("parameter value must be finite");
    }
    if (e.kind == SystemKind::template_system) {
        TemplateInstance inst = *e.instance;
        if (!inst.params.contains(name)) {
            throw DomainError("unknown symbol '" + symbol + "' for " + to_string(inst.id));
        }
        inst.params[name] = value;
        validate_slider_range(inst);
        e.tf = instantiate(inst);
        e.instance = std::move(inst);
        return;
    }
    if (!e.params.contains(name)) {
        throw DomainError("unknown symbol '" + symbol + "'");
    }
    if (value < kFreeSymbolMin || value > kFreeSymbolMax) {
        throw DomainError("parameter '" + symbol + "' out of range [" + format_number(kFreeSymbolMin) + ", " +
                          format_number(kFreeSymbolMax) + "]");
    }
    ParameterEnv env = e.params;
    env[name] = value;
    TransferFunction tf = parse_transfer_function(e.expression, env);
    e.tf = std::move(tf);
    e.params = std::move(env);
    e.instance = match_template(e.tf);
}

std::vector<std::string> move_pole(Session& s, std::string_view system_id, std::size_t index, Complex to) {
    SystemEntry& e = s.system(system_id);
    if (!std::isfinite(to.real()) || !std::isfinite(to.imag())) {
        throw DomainError("pole location must be finite");
    }
    if (e.kind == SystemKind::template_system) {
        const RootSet ps = poles(e.tf);
        if (index >= ps.size()) {
            throw DomainError("pole index out of range");
        }
        TemplateInstance inst = move_template_pole(*e.instance, ps, index, to);
        e.tf = instantiate(inst);
        e.instance = std::move(inst);
    } else {
        TransferFunction tf = e.tf;
        tf.den = move_root(tf.den, index, to, "pole");
        validate(tf);
        e.tf = std::move(tf);
        e.expression = to_expression(e.tf);
        e.params.clear();
        e.instance = match_template(e.tf);
    }
    return record(s, EventKind::pole_dragged, {{"system", e.id}});
}

std::vector<std::string> move_zero(Session& s, std::string_view system_id, std::size_t index, Complex to) {
    SystemEntry& e = s.system(system_id);
    if (e.kind == SystemKind::template_system) {
        if (e.instance->id != TemplateId::g5) {
            throw DomainError(to_string(e.instance->id) + " has no movable zero");
        }
        if (index != 0) {
            throw DomainError("zero index out of range");
        }
        require_real(to, "the zero of G5");
        if (!(to.real() < 0.0)) {
            throw DomainError("the zero of G5 must lie in the open left half plane");
        }
        TemplateInstance inst = *e.instance;
        inst.params["T_8"] = -1.0 / to.real();
        validate(inst);
        e.tf = instantiate(inst);
        e.instance = std::move(inst);
    } else {
        TransferFunction tf = e.tf;
        tf.num = move_root(tf.num, index, to, "zero");
        validate(tf);
        e.tf = std::move(tf);
        e.expression = to_expression(e.tf);
        e.params.clear();
        e.instance = match_template(e.tf);
    }
    return record(s, EventKind::zero_dragged, {{"system", e.id}});
}

void select_system(Session& s, std::string_view system_id) { s.selected = s.system(system_id).id; }

std::vector<std::string> set_input_kind(Session& s, InputKind kind) {
    if (s.input == kind) {
        return {};
    }
    s.input = kind;
    return record(s, EventKind::input_kind_changed, {{"input", to_string(kind)}});
}

std::vector<std::string> apply_event(Session& s, const Event& e) {
    RecordResult r = record_event(s.progress, achievement_catalog(), e);
    s.progress = std::move(r.state);
    return r.newly_unlocked;
}

FrequencyGrid view_frequency_grid(const TransferFunction& tf, const ViewParams& p) {
    const FrequencyGrid g = log_grid(p.wmin.value_or(1e-2), p.wmax.value_or(1e3), p.points.value_or(1000));
    return densify_for_delay(g, tf.delay);
}

TimeGrid view_time_grid(const TransferFunction& tf, const ViewParams& p) {
    const std::size_t n = p.time_points.value_or(500);
    return p.tmax ? linear_time_grid(*p.tmax, n) : default_time_grid(tf, n);
}

PoleZeroMap pole_zero_map(const TransferFunction& tf) { return {poles(tf), zeros(tf)}; }

std::string to_string(HoverPlot p) {
    switch (p) {
    case HoverPlot::bode_mag: return "bode_mag";
    case HoverPlot::bode_phase: return "bode_phase";
    case HoverPlot::nyquist: return "nyquist";
    case HoverPlot::step: return "step";
    }
    return "?";
}

HoverPlot parse_hover_plot(std::string_view text) {
    for (HoverPlot p : {HoverPlot::bode_mag, HoverPlot::bode_phase, HoverPlot::nyquist, HoverPlot::step}) {
        if (to_string(p) == text) {
            return p;
        }
    }
    throw DomainError("unknown plot '" + std::string(text) + "'");
}

HoverLink hover_link(const Session& s, const HoverQuery& q) {
    if (!std::isfinite(q.x) || !std::isfinite(q.y)) {
        throw DomainError("hover coordinate must be finite");
    }
    HoverLink h;
    switch (q.plot) {
    case HoverPlot::bode_mag:
    case HoverPlot::bode_phase:
        if (!(q.x > 0.0)) {
            throw DomainError("Bode hover needs omega > 0");
        }
        h.omega = q.x;
        if (q.plot == HoverPlot::bode_mag) {
            h.bode_mag_db = q.y;
            h.nyquist_circle_radius = std::pow(10.0, q.y / 20.0);
        } else {
            h.bode_phase_deg = q.y;
            h.nyquist_ray_deg = q.y;
        }
        for (const auto& e : s.systems) {
            h.systems.push_back(system_at(e, q.x));
        }
        break;
    case HoverPlot::nyquist: {
        const double r = std::hypot(q.x, q.y);
        h.bode_mag_db = 20.0 * std::log10(r);
        h.bode_phase_deg = std::atan2(q.y, q.x) * kRadToDeg;
        h.nyquist_circle_radius = r;
        h.nyquist_ray_deg = h.bode_phase_deg;
        // Vertical Bode lines at the frequency of the nearest curve point.
        double best = INFINITY;
        const SystemEntry* nearest = nullptr;
        for (const auto& e : s.systems) {
            const FrequencyResponse fr = freq_response(e.tf, view_frequency_grid(e.tf, {}));
            for (const auto& pt : nyquist_curve(fr)) {
                const double d = std::hypot(pt.re - q.x, pt.im - q.y);
                if (d < best) {
                    best = d;
                    h.omega = pt.omega;
                    nearest = &e;
                }
            }
        }
        if (nearest) {
            h.systems.push_back(system_at(*nearest, *h.omega));
        }
        break;
    }
    case HoverPlot::step: {
        if (!(q.ymax > q.ymin)) {
            throw DomainError("step hover needs ymax > ymin");
        }
        if (!(q.x >= 0.0)) {
            throw DomainError("step hover needs t >= 0");
        }
        const double reach = 0.02 * (q.ymax - q.ymin);
        double best = INFINITY;
        for (const auto& e : s.systems) {
            const double y = respond(e.tf, s.input, TimeGrid{{q.x}}).values.front();
            const double d = std::abs(y - q.y);
            if (std::isfinite(y) && d <= reach && d < best) {
                best = d;
                h.snap = StepSnap{e.id, q.x, y};
            }
        }
        break;
    }
    }
    return h;
}

const QuizQuestion& next_quiz_question(Session& s, std::optional<QuizCategory> category) {
    const std::uint64_t seed = fnv1a(s.id) ^ (0x9E3779B97F4A7C15ULL * (s.question_counter + 1));
    s.pending_question = next_question(s.quiz, category, seed);
    ++s.question_counter;
    return *s.pending_question;
}

QuizOutcome answer_quiz(Session& s, const QuizAnswer& answer) {
    if (!s.pending_question) {
        throw DomainError("no quiz question is pending");
    }
    const QuizQuestion q = *s.pending_question;
    QuizOutcome out;
    out.grade = grade(q, answer);
    s.quiz = update_difficulty(s.quiz, q.category, out.grade.correct);
    if (out.grade.correct) {
        out.points_awarded = quiz_points(q.difficulty);
        s.progress = award(s.progress, BadgeCategory::quiz, out.points_awarded);
    }
    out.unlocked = record(s, EventKind::quiz_answered, {{"category", to_string(q.category)}});
    s.pending_question.reset();
    if (out.grade.correct) {
        out.next = next_quiz_question(s, q.category);
    }
    return out;
}

AssignmentOutcome check_session_assignment(Session& s, const AssignmentDef& def, std::string_view system_id) {
    const SystemEntry& e = s.system(system_id);
    AssignmentOutcome out;
    out.result = check_assignment(def, {e.tf, e.instance});
    if (out.result.passed && !s.progress.completed_assignments.contains(def.id)) {
        s.progress.completed_assignments.insert(def.id);
        s.progress = award(s.progress, BadgeCategory::assignments, def.points);
        out.newly_completed = true;
        out.unlocked = record(s, EventKind::assignment_completed, {{"assignment", def.id}});
    }
    return out;
}

BadgeScale default_badge_scale() {
    BadgeScale scale{0, 0};
    for (const auto& a : achievement_catalog()) {
        scale.achievements += a.points;
    }
    for (const auto& a : assignment_catalog()) {
        scale.assignments += a.points;
    }
    return scale;
}

} // namespace pzx
