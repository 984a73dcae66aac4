#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>

namespace honeysheets {

/// Settings shared by the CLI subcommands. Command-line flags override them.
struct Config {
    std::string controlled_domain = "hs.example.org";
    std::string redirect_target = "https://www.google.com/";
    std::string mailbox_dir = "mailbox";
    std::string log_path = "access.log";
    std::string geo_table_path; // empty: every address is "unknown"
    std::uint64_t gen_seed = 1;
    std::uint64_t sim_seed = 42;
    int snapshot_cadence_minutes = 120;
    std::string bind = "127.0.0.1:8080";
};

/// Unknown keys are rejected so typos do not silently fall back to defaults.
/// Relative paths are taken relative to `base_dir`. Throws Error(ParseError)
/// for malformed values and Error(IoError) when geo_table_path does not exist.
Config config_from_json(const nlohmann::json& j, const std::string& base_dir = "");
Config load_config(const std::string& path);
nlohmann::json to_json(const Config& config);

} // namespace honeysheets
