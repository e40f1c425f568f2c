#include "pzx/config.hpp"

#include "pzx/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>

namespace pzx {

namespace {

int parse_port(const std::string& text, const std::string& origin) {
    int port = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), port);
    if (ec != std::errc{} || ptr != text.data() + text.size() || port < 0 || port > 65535) {
        throw DomainError(origin + ": port must be an integer in [0, 65535], got '" + text + "'");
    }
    return port;
}

void apply_file(Config& c, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DomainError("cannot read config file " + path.string());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError("malformed config file " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) {
        throw DomainError("config file " + path.string() + " must hold a JSON object");
    }
    try {
        if (j.contains("data_dir")) {
            c.data_dir = j["data_dir"].get<std::string>();
        }
        if (j.contains("listen_address")) {
            c.listen_address = j["listen_address"].get<std::string>();
        }
        if (j.contains("port")) {
            const auto& p = j["port"];
            c.port = parse_port(p.is_string() ? p.get<std::string>() : p.dump(), path.string());
        }
        if (j.contains("assignments")) {
            c.assignments_file = j["assignments"].get<std::string>();
        }
    } catch (const nlohmann::json::type_error& e) {
        throw DomainError("config file " + path.string() + ": " + e.what());
    }
}

} // namespace

std::optional<std::string> system_env(const std::string& name) {
    if (const char* v = std::getenv(name.c_str())) {
        return std::string(v);
    }
    return std::nullopt;
}

Config load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env) {
    Config c;
    std::optional<std::filesystem::path> path = file;
    if (!path) {
        if (auto p = env("PZX_CONFIG")) {
            path = *p;
        }
    }
    if (path) {
        apply_file(c, *path);
    }
    if (auto v = env("PZX_DATA_DIR")) {
        c.data_dir = *v;
    }
    if (auto v = env("PZX_LISTEN_ADDRESS")) {
        c.listen_address = *v;
    }
    if (auto v = env("PZX_PORT")) {
        c.port = parse_port(*v, "PZX_PORT");
    }
    if (auto v = env("PZX_ASSIGNMENTS")) {
        c.assignments_file = *v;
    }
    return c;
}

} // namespace pzx
