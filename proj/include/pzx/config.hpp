#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

namespace pzx {

struct Config {
    std::filesystem::path data_dir = "pzx-data";
    std::string listen_address = "127.0.0.1";
    int port = 8080;
    /// Optional replacement for the built-in assignment catalog.
    std::optional<std::filesystem::path> assignments_file;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Process environment.
std::optional<std::string> system_env(const std::string& name);

/// Defaults, overridden by the JSON config file (keys data_dir, listen_address,
/// port, assignments), overridden by PZX_DATA_DIR, PZX_LISTEN_ADDRESS, PZX_PORT
/// and PZX_ASSIGNMENTS. Without an explicit file, PZX_CONFIG names one.
/// Throws DomainError on unreadable files or invalid values.
Config load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env = system_env);

} // namespace pzx
