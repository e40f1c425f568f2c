#pragma once

#include "pzx/gamification.hpp"
#include "pzx/session_store.hpp"

#include <map>
#include <string>
#include <vector>

namespace pzx {

struct HttpRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::string body;
};

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
    std::map<std::string, std::string> headers;
};

/// Transport-independent router for the /api/v1 JSON API. Errors map to
/// 400 (malformed body or expression), 404 (unknown resource), 405, and
/// 422 (valid request the model rejects), each with an {"error": {...}} body.
class Api {
public:
    explicit Api(SessionStore& store, std::vector<AssignmentDef> assignments = assignment_catalog());

    HttpResponse handle(const HttpRequest& req);

private:
    HttpResponse route(const HttpRequest& req);
    HttpResponse session_route(const HttpRequest& req, const std::vector<std::string>& seg);
    HttpResponse system_route(const HttpRequest& req, const std::string& sid, const std::vector<std::string>& seg);
    HttpResponse catalog_route(const HttpRequest& req, const std::vector<std::string>& seg);
    const AssignmentDef& assignment(const std::string& id) const;

    SessionStore& store_;
    std::vector<AssignmentDef> assignments_;
};

} // namespace pzx
