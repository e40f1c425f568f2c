#include "pzx/serialization.hpp"

#include "pzx/error.hpp"

#include <cmath>

namespace pzx {

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json optional_number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

Json complex_json(Complex z) { return {{"re", number(z.real())}, {"im", number(z.imag())}}; }

double finite_double(const Json& j, const char* what) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be finite");
    }
    return v;
}

Polynomial polynomial_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) {
        throw DomainError("coefficient list must be a non-empty array");
    }
    std::vector<double> c;
    for (const auto& v : j) {
        c.push_back(finite_double(v, "coefficient"));
    }
    return Polynomial(std::move(c));
}

} // namespace

Json to_json(const Polynomial& p) { return Json(p.coefficients()); }

Json to_json(const TransferFunction& tf) {
    return {{"num", to_json(tf.num)}, {"den", to_json(tf.den)}, {"delay", tf.delay}};
}

Json to_json(const TemplateInstance& inst) {
    Json params = Json::object();
    for (const auto& [k, v] : inst.params) {
        params[k] = v;
    }
    return {{"template", to_string(inst.id)}, {"params", params}};
}

Json to_json(const QuizState& qs) {
    Json j = Json::object();
    for (QuizCategory c : kAllQuizCategories) {
        j[to_string(c)] = {{"difficulty", qs.at(c).difficulty}, {"streak", qs.at(c).streak}};
    }
    return j;
}

Json to_json(const ProgressState& ps) {
    Json cats = Json::object();
    for (const auto& [k, v] : ps.category_points) {
        cats[to_string(k)] = v;
    }
    Json events = Json::object();
    for (const auto& [k, v] : ps.event_counts) {
        events[to_string(k)] = v;
    }
    return {{"points", ps.points},
            {"level", ps.level},
            {"category_points", cats},
            {"event_counts", events},
            {"unlocked", ps.unlocked},
            {"completed_assignments", ps.completed_assignments}};
}

Json to_json(const QuizQuestion& q, bool with_answer) {
    Json systems = Json::array();
    for (const auto& tf : q.systems) {
        Json s = to_json(tf);
        s["expression"] = to_expression(tf);
        systems.push_back(std::move(s));
    }
    Json j{{"category", to_string(q.category)},
           {"difficulty", q.difficulty},
           {"prompt", q.prompt},
           {"tolerance", q.tolerance},
           {"systems", systems}};
    // The target of selection categories is the answer itself.
    const bool selection = q.category == QuizCategory::click_complexity || q.category == QuizCategory::odd_one_out;
    if (with_answer || q.category != QuizCategory::odd_one_out) {
        j["target"] = q.target;
    }
    if (q.category == QuizCategory::click_time) {
        j["time_span"] = q.time_span;
    }
    if (with_answer) {
        j["time_span"] = q.time_span;
        j["property"] = q.property ? Json(to_string(*q.property)) : Json(nullptr);
        j["answer_index"] = q.answer_index ? Json(*q.answer_index) : Json(nullptr);
    } else if (selection) {
        j["options"] = static_cast<int>(q.systems.size());
    }
    return j;
}

Json to_json(const SystemEntry& e) {
    Json params = Json::object();
    for (const auto& [k, v] : e.params) {
        params[k] = v;
    }
    return {{"id", e.id},
            {"kind", e.kind == SystemKind::template_system ? "template" : "expression"},
            {"expression", e.expression},
            {"tf", to_json(e.tf)},
            {"instance", e.instance ? to_json(*e.instance) : Json(nullptr)},
            {"params", params},
            {"color", e.color}};
}

Json to_json(const Session& s) {
    Json systems = Json::array();
    for (const auto& e : s.systems) {
        systems.push_back(to_json(e));
    }
    return {{"id", s.id},
            {"systems", systems},
            {"selected", s.selected},
            {"input", to_string(s.input)},
            {"quiz", to_json(s.quiz)},
            {"progress", to_json(s.progress)},
            {"pending_question", s.pending_question ? to_json(*s.pending_question, true) : Json(nullptr)},
            {"question_counter", s.question_counter},
            {"next_system_number", s.next_system_number}};
}

Json to_json(const TemplateInfo& info) {
    Json params = Json::array();
    for (const auto& p : info.params) {
        params.push_back({{"name", p.name},
                          {"label", p.label},
                          {"default", p.default_value},
                          {"min", p.min},
                          {"max", p.max},
                          {"log_scale", p.log_scale}});
    }
    return {{"id", info.key}, {"description", info.description}, {"expression", info.expression}, {"params", params}};
}

Json to_json(const AchievementDef& a) {
    return {{"id", a.id}, {"title", a.title}, {"trigger", to_string(a.trigger)}, {"count", a.count},
            {"points", a.points}};
}

Json to_json(const AssignmentDef& a) {
    return {{"id", a.id},
            {"group", to_string(a.group)},
            {"prose", a.prose},
            {"quantity", to_string(a.quantity)},
            {"comparator", to_string(a.comparator)},
            {"target", a.target},
            {"tolerance", a.tolerance},
            {"relative_tolerance", a.relative_tolerance},
            {"reference", optional_number(a.reference)},
            {"explanation", a.explanation},
            {"points", a.points}};
}

Json to_json(const SourceText& src) {
    return {{"text", src.text}, {"target", to_string(src.target)}, {"filename", src.filename}};
}

Json to_json(const StabilityMargins& m) {
    return {{"gain_margin", number(m.gain_margin)},
            {"gain_margin_infinite", std::isinf(m.gain_margin)},
            {"gm_db", number(m.gm_db)},
            {"omega_pc", optional_number(m.omega_pc)},
            {"phase_margin_deg", optional_number(m.phase_margin_deg)},
            {"omega_gc", optional_number(m.omega_gc)}};
}

Json to_json(const HoverLink& h) {
    Json systems = Json::array();
    for (const auto& s : h.systems) {
        systems.push_back({{"system_id", s.system_id},
                           {"mag_db", number(s.mag_db)},
                           {"phase_deg", number(s.phase_deg)},
                           {"re", number(s.re)},
                           {"im", number(s.im)}});
    }
    Json snap = nullptr;
    if (h.snap) {
        snap = {{"system_id", h.snap->system_id}, {"t", h.snap->t}, {"y", number(h.snap->y)}};
    }
    return {{"nyquist_circle_radius", optional_number(h.nyquist_circle_radius)},
            {"nyquist_ray_deg", optional_number(h.nyquist_ray_deg)},
            {"bode_mag_db", optional_number(h.bode_mag_db)},
            {"bode_phase_deg", optional_number(h.bode_phase_deg)},
            {"omega", optional_number(h.omega)},
            {"systems", systems},
            {"snap", snap}};
}

Json to_json(const GradeResult& g) { return {{"correct", g.correct}, {"feedback", g.feedback}}; }

Json to_json(const LayeredAnswer& a) {
    return {{"summary", a.summary}, {"expanded", a.expanded}, {"mathematical", a.mathematical}};
}

TransferFunction transfer_function_from_json(const Json& j) {
    TransferFunction tf{polynomial_from_json(j.at("num")), polynomial_from_json(j.at("den")),
                        finite_double(j.at("delay"), "delay")};
    validate(tf);
    return tf;
}

TemplateInstance template_instance_from_json(const Json& j) {
    TemplateInstance inst{parse_template_id(j.at("template").get<std::string>()), {}};
    for (const auto& [k, v] : j.at("params").items()) {
        inst.params[k] = finite_double(v, "parameter");
    }
    validate(inst);
    return inst;
}

QuizState quiz_state_from_json(const Json& j) {
    QuizState qs;
    for (QuizCategory c : kAllQuizCategories) {
        const Json& r = j.at(to_string(c));
        qs.at(c) = {r.at("difficulty").get<int>(), r.at("streak").get<int>()};
    }
    validate(qs);
    return qs;
}

ProgressState progress_from_json(const Json& j) {
    ProgressState ps;
    ps.points = j.at("points").get<int>();
    ps.level = j.at("level").get<int>();
    for (const auto& [k, v] : j.at("category_points").items()) {
        ps.category_points[parse_badge_category(k)] = v.get<int>();
    }
    for (const auto& [k, v] : j.at("event_counts").items()) {
        ps.event_counts[parse_event_kind(k)] = v.get<int>();
    }
    ps.unlocked = j.at("unlocked").get<std::vector<std::string>>();
    ps.completed_assignments = j.at("completed_assignments").get<std::set<std::string>>();
    if (ps.points < 0 || ps.level < 0) {
        throw DomainError("progress counters must be nonnegative");
    }
    return ps;
}

QuizQuestion quiz_question_from_json(const Json& j) {
    QuizQuestion q;
    q.category = parse_quiz_category(j.at("category").get<std::string>());
    q.difficulty = j.at("difficulty").get<int>();
    q.prompt = j.at("prompt").get<std::string>();
    q.target = j.at("target").get<double>();
    q.tolerance = j.at("tolerance").get<double>();
    q.time_span = j.at("time_span").get<double>();
    for (const auto& s : j.at("systems")) {
        q.systems.push_back(transfer_function_from_json(s));
    }
    if (const Json& p = j.at("property"); !p.is_null()) {
        q.property = parse_odd_property(p.get<std::string>());
    }
    if (const Json& a = j.at("answer_index"); !a.is_null()) {
        q.answer_index = a.get<int>();
    }
    return q;
}

SystemEntry system_entry_from_json(const Json& j) {
    SystemEntry e;
    e.id = j.at("id").get<std::string>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "template") {
        e.kind = SystemKind::template_system;
    } else if (kind == "expression") {
        e.kind = SystemKind::expression_system;
    } else {
        throw DomainError("unknown system kind '" + kind + "'");
    }
    e.expression = j.at("expression").get<std::string>();
    e.tf = transfer_function_from_json(j.at("tf"));
    if (const Json& inst = j.at("instance"); !inst.is_null()) {
        e.instance = template_instance_from_json(inst);
    }
    if (e.kind == SystemKind::template_system && !e.instance) {
        throw DomainError("template system '" + e.id + "' lacks its instance");
    }
    for (const auto& [k, v] : j.at("params").items()) {
        e.params[k] = finite_double(v, "parameter");
    }
    e.color = j.at("color").get<int>();
    return e;
}

Session session_from_json(const Json& j) {
    Session s;
    s.id = j.at("id").get<std::string>();
    for (const auto& e : j.at("systems")) {
        s.systems.push_back(system_entry_from_json(e));
    }
    if (s.systems.size() > kMaxSystems) {
        throw DomainError("too many systems");
    }
    s.selected = j.at("selected").get<std::string>();
    if (!s.systems.empty()) {
        s.system(s.selected);
    }
    s.input = parse_input_kind(j.at("input").get<std::string>());
    s.quiz = quiz_state_from_json(j.at("quiz"));
    s.progress = progress_from_json(j.at("progress"));
    if (const Json& q = j.at("pending_question"); !q.is_null()) {
        s.pending_question = quiz_question_from_json(q);
    }
    s.question_counter = j.at("question_counter").get<std::uint64_t>();
    s.next_system_number = j.at("next_system_number").get<int>();
    return s;
}

AchievementDef achievement_from_json(const Json& j) {
    return {j.at("id").get<std::string>(), j.at("title").get<std::string>(),
            parse_event_kind(j.at("trigger").get<std::string>()), j.value("count", 1), j.value("points", 10)};
}

AssignmentDef assignment_from_json(const Json& j) {
    AssignmentDef a{j.at("id").get<std::string>(),
                    parse_template_id(j.at("group").get<std::string>()),
                    j.at("prose").get<std::string>(),
                    parse_quantity(j.at("quantity").get<std::string>()),
                    parse_comparator(j.at("comparator").get<std::string>()),
                    j.at("target").get<double>(),
                    j.at("tolerance").get<double>(),
                    j.value("relative_tolerance", false),
                    std::nullopt,
                    j.value("explanation", std::string{}),
                    j.value("points", 10)};
    if (j.contains("reference") && !j["reference"].is_null()) {
        a.reference = j["reference"].get<double>();
    }
    validate(a);
    return a;
}

namespace {

template <class T, class F>
std::vector<T> load_catalog(std::string_view text, const char* key, F&& parse_one) {
    try {
        const Json doc = Json::parse(text);
        std::vector<T> out;
        for (const auto& item : doc.at(key)) {
            out.push_back(parse_one(item));
        }
        return out;
    } catch (const Json::parse_error& e) {
        throw DocumentError(DocumentError::Kind::parse, std::string("malformed catalog: ") + e.what());
    } catch (const Json::exception& e) {
        throw DocumentError(DocumentError::Kind::schema, std::string("invalid catalog: ") + e.what());
    }
}

} // namespace

std::vector<AchievementDef> load_achievement_catalog(std::string_view text) {
    auto defs = load_catalog<AchievementDef>(text, "achievements", achievement_from_json);
    validate(defs);
    return defs;
}

std::vector<AssignmentDef> load_assignment_catalog(std::string_view text) {
    return load_catalog<AssignmentDef>(text, "assignments", assignment_from_json);
}

Json bode_payload(const FrequencyResponse& fr) {
    Json mag = Json::array();
    Json phase = Json::array();
    for (std::size_t k = 0; k < fr.size(); ++k) {
        mag.push_back(number(fr.mag_db[k]));
        phase.push_back(number(fr.phase_deg[k]));
    }
    return {{"omega", fr.omegas}, {"mag_db", mag}, {"phase_deg", phase},
            {"singular", std::vector<int>(fr.singular.begin(), fr.singular.end())}};
}

Json nyquist_payload(const FrequencyResponse& fr) {
    Json omega = Json::array();
    Json re = Json::array();
    Json im = Json::array();
    for (const auto& p : nyquist_curve(fr)) {
        omega.push_back(p.omega);
        re.push_back(number(p.re));
        im.push_back(number(p.im));
    }
    return {{"omega", omega}, {"re", re}, {"im", im}};
}

Json time_payload(const TimeResponse& r) {
    Json values = Json::array();
    for (double v : r.values) {
        values.push_back(number(v));
    }
    return {{"t", r.times}, {"y", values}, {"method", to_string(r.method)}, {"input", to_string(r.input_kind)}};
}

Json pzmap_payload(const PoleZeroMap& m) {
    Json poles = Json::array();
    Json zeros = Json::array();
    for (Complex p : m.poles) {
        poles.push_back(complex_json(p));
    }
    for (Complex z : m.zeros) {
        zeros.push_back(complex_json(z));
    }
    return {{"poles", poles}, {"zeros", zeros}};
}

Json badges_payload(const ProgressState& ps, const BadgeScale& scale) {
    Json j = Json::object();
    for (const auto& [cat, badge] : badge_progress(ps, scale)) {
        j[to_string(cat)] = to_string(badge);
    }
    return j;
}

std::string save_session(const Session& s) {
    const Json doc{{"schema_version", kSchemaVersion}, {"session", to_json(s)}};
    return doc.dump(2) + "\n";
}

Session load_session(std::string_view document) {
    Json doc;
    try {
        doc = Json::parse(document);
    } catch (const Json::parse_error& e) {
        throw DocumentError(DocumentError::Kind::parse, std::string("malformed session document: ") + e.what());
    }
    try {
        if (!doc.is_object() || !doc.contains("schema_version")) {
            throw DocumentError(DocumentError::Kind::schema, "session document lacks schema_version");
        }
        const Json& v = doc.at("schema_version");
        if (!v.is_number_integer() || v.get<long long>() != kSchemaVersion) {
            throw DocumentError(DocumentError::Kind::version,
                                "unsupported schema_version " + v.dump() + " (expected " +
                                    std::to_string(kSchemaVersion) + ")");
        }
        return session_from_json(doc.at("session"));
    } catch (const DocumentError&) {
        throw;
    } catch (const Json::exception& e) {
        throw DocumentError(DocumentError::Kind::schema, std::string("invalid session document: ") + e.what());
    } catch (const Error& e) {
        throw DocumentError(DocumentError::Kind::schema, std::string("invalid session document: ") + e.what());
    }
}

} // namespace pzx
