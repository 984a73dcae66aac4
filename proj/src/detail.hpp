#pragma once

// Internal helpers shared by the library sources.

#include "honeysheets/error.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

namespace honeysheets::detail {

template <typename F>
auto parse_guard(std::string_view what, F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, std::string(what) + ": " + e.what());
    }
}

inline std::size_t index_at(const nlohmann::json& j, const char* key) {
    const auto v = j.at(key).get<long long>();
    if (v < 0)
        throw Error(Errc::ParseError, std::string("negative ") + key);
    return static_cast<std::size_t>(v);
}

/// Compact canonical dump; invalid UTF-8 is replaced rather than thrown on.
inline std::string dump(const nlohmann::json& j, int indent = -1) {
    return j.dump(indent, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place.
void write_file(const std::filesystem::path& path, std::string_view content);

nlohmann::json read_json_file(const std::filesystem::path& path);

std::string to_lower(std::string_view s);

} // namespace honeysheets::detail
