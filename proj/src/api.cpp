#include "pzx/api.hpp"

#include "pzx/error.hpp"
#include "pzx/export.hpp"
#include "pzx/serialization.hpp"

#include <charconv>
#include <cmath>

namespace pzx {

namespace {

/// Client sent something unusable (bad JSON, missing field, wrong type).
class BadRequest : public Error {
public:
    using Error::Error;
};

class MethodNotAllowed : public Error {
public:
    using Error::Error;
};

HttpResponse json_response(const Json& j, int status = 200) { return {status, j.dump(), "application/json", {}}; }

HttpResponse error_response(int status, const std::string& type, const std::string& message,
                            std::optional<std::size_t> offset = std::nullopt) {
    Json err{{"type", type}, {"message", message}};
    if (offset) {
        err["offset"] = *offset;
    }
    return json_response({{"error", err}}, status);
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> seg;
    std::size_t i = 0;
    while (i < path.size()) {
        const std::size_t j = path.find('/', i);
        const std::size_t end = j == std::string::npos ? path.size() : j;
        if (end > i) {
            seg.push_back(path.substr(i, end - i));
        }
        i = end + 1;
    }
    return seg;
}

Json body_json(const HttpRequest& req) {
    if (req.body.empty()) {
        return Json::object();
    }
    try {
        Json j = Json::parse(req.body);
        if (!j.is_object()) {
            throw BadRequest("request body must be a JSON object");
        }
        return j;
    } catch (const Json::parse_error& e) {
        throw BadRequest(std::string("malformed JSON body: ") + e.what());
    }
}

const Json& field(const Json& j, const char* name) {
    if (!j.contains(name) || j[name].is_null()) {
        throw BadRequest(std::string("missing field '") + name + "'");
    }
    return j[name];
}

std::string string_field(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (!v.is_string()) {
        throw BadRequest(std::string("field '") + name + "' must be a string");
    }
    return v.get<std::string>();
}

double number_field(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (!v.is_number()) {
        throw BadRequest(std::string("field '") + name + "' must be a number");
    }
    return v.get<double>();
}

std::optional<double> optional_number(const Json& j, const char* name) {
    if (!j.contains(name) || j[name].is_null()) {
        return std::nullopt;
    }
    return number_field(j, name);
}

void require_method(const HttpRequest& req, std::initializer_list<const char*> allowed) {
    for (const char* m : allowed) {
        if (req.method == m) {
            return;
        }
    }
    throw MethodNotAllowed("method " + req.method + " not allowed on " + req.path);
}

double query_double(const HttpRequest& req, const std::string& key) {
    const std::string& text = req.query.at(key);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw BadRequest("query parameter '" + key + "' must be a finite number");
    }
    return v;
}

std::size_t query_count(const HttpRequest& req, const std::string& key) {
    const double v = query_double(req, key);
    if (v < 2 || v > 1e6 || v != std::floor(v)) {
        throw BadRequest("query parameter '" + key + "' must be an integer in [2, 1000000]");
    }
    return static_cast<std::size_t>(v);
}

ViewParams view_params(const HttpRequest& req) {
    ViewParams p;
    if (req.query.contains("wmin")) p.wmin = query_double(req, "wmin");
    if (req.query.contains("wmax")) p.wmax = query_double(req, "wmax");
    if (req.query.contains("points")) p.points = query_count(req, "points");
    if (req.query.contains("tmax")) p.tmax = query_double(req, "tmax");
    if (req.query.contains("tpoints")) p.time_points = query_count(req, "tpoints");
    return p;
}

Json public_question(const std::optional<QuizQuestion>& q) { return q ? to_json(*q, false) : Json(nullptr); }

Json snapshot(const Session& s) {
    Json j = to_json(s);
    j["pending_question"] = public_question(s.pending_question);
    j["badges"] = badges_payload(s.progress, default_badge_scale());
    return j;
}

Json progress_payload(const Session& s) {
    Json j = to_json(s.progress);
    j["badges"] = badges_payload(s.progress, default_badge_scale());
    return j;
}

} // namespace

Api::Api(SessionStore& store, std::vector<AssignmentDef> assignments)
    : store_(store), assignments_(std::move(assignments)) {
    for (const auto& a : assignments_) {
        validate(a);
    }
}

HttpResponse Api::handle(const HttpRequest& req) {
    try {
        return route(req);
    } catch (const ExpressionError& e) {
        return error_response(400, "parse_error", e.what(), e.offset());
    } catch (const BadRequest& e) {
        return error_response(400, "bad_request", e.what());
    } catch (const Json::exception& e) {
        return error_response(400, "bad_request", e.what());
    } catch (const NotFoundError& e) {
        return error_response(404, "not_found", e.what());
    } catch (const MethodNotAllowed& e) {
        return error_response(405, "method_not_allowed", e.what());
    } catch (const DocumentError& e) {
        return error_response(500, "corrupt_session", e.what());
    } catch (const NumericError& e) {
        return error_response(422, "numeric_error", e.what());
    } catch (const DomainError& e) {
        return error_response(422, "domain_error", e.what());
    } catch (const std::exception& e) {
        return error_response(500, "internal_error", e.what());
    }
}

HttpResponse Api::route(const HttpRequest& req) {
    const auto seg = split_path(req.path);
    if (seg.size() < 3 || seg[0] != "api" || seg[1] != "v1") {
        throw NotFoundError("no route for " + req.path);
    }
    if (seg[2] == "sessions") {
        return session_route(req, seg);
    }
    if (seg[2] == "catalog") {
        return catalog_route(req, seg);
    }
    throw NotFoundError("no route for " + req.path);
}

HttpResponse Api::catalog_route(const HttpRequest& req, const std::vector<std::string>& seg) {
    require_method(req, {"GET"});
    if (seg.size() == 4 && seg[3] == "templates") {
        Json list = Json::array();
        for (const auto& info : template_catalog()) {
            list.push_back(to_json(info));
        }
        return json_response({{"templates", list}});
    }
    if (seg.size() == 4 && seg[3] == "achievements") {
        Json list = Json::array();
        for (const auto& a : achievement_catalog()) {
            list.push_back(to_json(a));
        }
        return json_response({{"achievements", list}});
    }
    if (seg.size() == 4 && seg[3] == "assignments") {
        Json list = Json::array();
        for (const auto& a : assignments_) {
            list.push_back(to_json(a));
        }
        return json_response({{"assignments", list}});
    }
    if (seg.size() == 4 && seg[3] == "questions") {
        return json_response({{"topics", question_topics()}});
    }
    if (seg.size() == 5 && seg[3] == "questions") {
        try {
            Json j = to_json(question_bank(seg[4]));
            j["topic"] = seg[4];
            return json_response(j);
        } catch (const DomainError& e) {
            throw NotFoundError(e.what());
        }
    }
    throw NotFoundError("no route for " + req.path);
}

HttpResponse Api::session_route(const HttpRequest& req, const std::vector<std::string>& seg) {
    if (seg.size() == 3) {
        require_method(req, {"POST"});
        return json_response(snapshot(store_.create()), 201);
    }
    const std::string& sid = seg[3];
    if (seg.size() == 4) {
        require_method(req, {"GET", "PATCH"});
        if (req.method == "GET") {
            return json_response(snapshot(store_.get(sid)));
        }
        const Json body = body_json(req);
        Json unlocked = Json::array();
        const Session s = store_.update(sid, [&](Session& s) {
            if (body.contains("selected")) {
                select_system(s, string_field(body, "selected"));
            }
            if (body.contains("input")) {
                unlocked = set_input_kind(s, parse_input_kind(string_field(body, "input")));
            }
            return s;
        });
        Json j = snapshot(s);
        j["unlocked"] = unlocked;
        return json_response(j);
    }
    const std::string& resource = seg[4];
    if (resource == "systems") {
        if (seg.size() == 5) {
            require_method(req, {"GET", "POST"});
            if (req.method == "GET") {
                Json list = Json::array();
                for (const auto& e : store_.get(sid).systems) {
                    list.push_back(to_json(e));
                }
                return json_response({{"systems", list}});
            }
            const Json body = body_json(req);
            SystemSource src;
            if (body.contains("template")) {
                src.template_id = parse_template_id(string_field(body, "template"));
            }
            if (body.contains("expression")) {
                src.expression = string_field(body, "expression");
            }
            if (src.template_id.has_value() == src.expression.has_value()) {
                throw BadRequest("give exactly one of 'template' or 'expression'");
            }
            return store_.update(sid, [&](Session& s) {
                const AddResult r = add_system(s, src);
                return json_response(
                    {{"system_id", r.system_id}, {"system", to_json(s.system(r.system_id))}, {"unlocked", r.unlocked}},
                    201);
            });
        }
        return system_route(req, sid, seg);
    }
    if (resource == "hover" && seg.size() == 5) {
        require_method(req, {"POST"});
        const Json body = body_json(req);
        HoverQuery q{parse_hover_plot(string_field(body, "plot")), number_field(body, "x"), number_field(body, "y")};
        q.ymin = optional_number(body, "ymin").value_or(q.ymin);
        q.ymax = optional_number(body, "ymax").value_or(q.ymax);
        return json_response(to_json(hover_link(store_.get(sid), q)));
    }
    if (resource == "events" && seg.size() == 5) {
        require_method(req, {"POST"});
        const Json body = body_json(req);
        Event e{parse_event_kind(string_field(body, "kind")), {}};
        if (body.contains("payload") && !body["payload"].is_null()) {
            if (!body["payload"].is_object()) {
                throw BadRequest("field 'payload' must be an object");
            }
            for (const auto& [k, v] : body["payload"].items()) {
                e.payload[k] = v.is_string() ? v.get<std::string>() : v.dump();
            }
        }
        return store_.update(sid, [&](Session& s) {
            const auto unlocked = apply_event(s, e);
            return json_response({{"unlocked", unlocked}, {"progress", progress_payload(s)}});
        });
    }
    if (resource == "progress" && seg.size() == 5) {
        require_method(req, {"GET"});
        return json_response(progress_payload(store_.get(sid)));
    }
    if (resource == "quiz") {
        if (seg.size() == 5) {
            require_method(req, {"GET"});
            const Session s = store_.get(sid);
            return json_response({{"quiz", to_json(s.quiz)}, {"pending_question", public_question(s.pending_question)}});
        }
        if (seg.size() == 6 && seg[5] == "next") {
            require_method(req, {"POST"});
            const Json body = body_json(req);
            std::optional<QuizCategory> cat;
            if (body.contains("category") && !body["category"].is_null()) {
                cat = parse_quiz_category(string_field(body, "category"));
            }
            return store_.update(sid, [&](Session& s) {
                return json_response({{"question", to_json(next_quiz_question(s, cat), false)}});
            });
        }
        if (seg.size() == 6 && seg[5] == "answer") {
            require_method(req, {"POST"});
            const Json body = body_json(req);
            QuizAnswer a;
            a.value = optional_number(body, "value");
            if (body.contains("re") || body.contains("im")) {
                a.point = Complex{number_field(body, "re"), number_field(body, "im")};
            }
            if (body.contains("choice") && !body["choice"].is_null()) {
                if (!body["choice"].is_number_integer()) {
                    throw BadRequest("field 'choice' must be an integer");
                }
                a.choice = body["choice"].get<int>();
            }
            return store_.update(sid, [&](Session& s) {
                const QuizOutcome out = answer_quiz(s, a);
                return json_response({{"correct", out.grade.correct},
                                      {"feedback", out.grade.feedback},
                                      {"points_awarded", out.points_awarded},
                                      {"unlocked", out.unlocked},
                                      {"quiz", to_json(s.quiz)},
                                      {"progress", progress_payload(s)},
                                      {"next", public_question(out.next)}});
            });
        }
    }
    if (resource == "assignments") {
        if (seg.size() == 5) {
            require_method(req, {"GET"});
            const Session s = store_.get(sid);
            Json list = Json::array();
            for (const auto& a : assignments_) {
                Json j = to_json(a);
                j["completed"] = s.progress.completed_assignments.contains(a.id);
                list.push_back(j);
            }
            return json_response({{"assignments", list}});
        }
        if (seg.size() == 7 && seg[6] == "check") {
            require_method(req, {"POST"});
            const AssignmentDef& def = assignment(seg[5]);
            const Json body = body_json(req);
            std::optional<std::string> system_id;
            if (body.contains("system_id")) {
                system_id = string_field(body, "system_id");
            }
            return store_.update(sid, [&](Session& s) {
                const AssignmentOutcome out = check_session_assignment(s, def, system_id.value_or(s.selected));
                Json explanation = out.result.explanation ? Json(*out.result.explanation) : Json(nullptr);
                return json_response({{"passed", out.result.passed},
                                      {"measured", std::isfinite(out.result.measured) ? Json(out.result.measured)
                                                                                      : Json(nullptr)},
                                      {"explanation", explanation},
                                      {"newly_completed", out.newly_completed},
                                      {"unlocked", out.unlocked},
                                      {"progress", progress_payload(s)}});
            });
        }
    }
    throw NotFoundError("no route for " + req.path);
}

HttpResponse Api::system_route(const HttpRequest& req, const std::string& sid, const std::vector<std::string>& seg) {
    const std::string& id = seg[5];
    if (seg.size() == 6) {
        require_method(req, {"GET", "DELETE"});
        if (req.method == "GET") {
            return json_response(to_json(store_.get(sid).system(id)));
        }
        return store_.update(sid, [&](Session& s) {
            const auto unlocked = remove_system(s, id);
            return json_response({{"removed", id}, {"unlocked", unlocked}});
        });
    }
    if (seg.size() != 7) {
        throw NotFoundError("no route for " + req.path);
    }
    const std::string& action = seg[6];
    if (action == "params") {
        require_method(req, {"PATCH"});
        const Json body = body_json(req);
        const std::string symbol = string_field(body, "symbol");
        const double value = number_field(body, "value");
        return store_.update(sid, [&](Session& s) {
            update_parameter(s, id, symbol, value);
            return json_response({{"system", to_json(s.system(id))}});
        });
    }
    if (action == "pole-move" || action == "zero-move") {
        require_method(req, {"POST"});
        const Json body = body_json(req);
        const Json& idx = field(body, "index");
        if (!idx.is_number_integer() || idx.get<long long>() < 0) {
            throw BadRequest("field 'index' must be a nonnegative integer");
        }
        const auto index = idx.get<std::size_t>();
        const Complex to{number_field(body, "re"), number_field(body, "im")};
        return store_.update(sid, [&](Session& s) {
            const auto unlocked = action == "pole-move" ? move_pole(s, id, index, to) : move_zero(s, id, index, to);
            return json_response({{"system", to_json(s.system(id))}, {"unlocked", unlocked}});
        });
    }
    if (action == "export") {
        require_method(req, {"GET"});
        if (!req.query.contains("target")) {
            throw BadRequest("missing query parameter 'target'");
        }
        const ExportTarget target = parse_export_target(req.query.at("target"));
        return store_.update(sid, [&](Session& s) {
            const SystemEntry& e = s.system(id);
            const std::string name = e.instance && e.kind == SystemKind::template_system ? to_string(e.instance->id) : e.id;
            const SourceText src = generate_code(e.tf, target, name);
            Json j = to_json(src);
            j["unlocked"] = apply_event(s, Event{EventKind::code_exported, {{"target", to_string(target)}}});
            HttpResponse r = json_response(j);
            r.headers["Content-Disposition"] = "attachment; filename=\"" + src.filename + "\"";
            return r;
        });
    }

    require_method(req, {"GET"});
    const Session s = store_.get(sid);
    const SystemEntry& e = s.system(id);
    const ViewParams p = view_params(req);
    Json j;
    if (action == "bode") {
        j = bode_payload(freq_response(e.tf, view_frequency_grid(e.tf, p)));
    } else if (action == "nyquist") {
        j = nyquist_payload(freq_response(e.tf, view_frequency_grid(e.tf, p)));
    } else if (action == "step") {
        const InputKind kind = req.query.contains("input") ? parse_input_kind(req.query.at("input")) : s.input;
        j = time_payload(respond(e.tf, kind, view_time_grid(e.tf, p)));
    } else if (action == "pzmap") {
        j = pzmap_payload(pole_zero_map(e.tf));
    } else if (action == "margins") {
        j = to_json(margins(e.tf));
    } else {
        throw NotFoundError("no route for " + req.path);
    }
    j["system_id"] = e.id;
    return json_response(j);
}

const AssignmentDef& Api::assignment(const std::string& id) const {
    for (const auto& a : assignments_) {
        if (a.id == id) {
            return a;
        }
    }
    throw NotFoundError("unknown assignment '" + id + "'");
}

} // namespace pzx
