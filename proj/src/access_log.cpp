#include "detail.hpp"
#include "honeysheets/error.hpp"
#include "honeysheets/honeylink.hpp"

#include <fstream>

namespace honeysheets::honeylink {

using nlohmann::json;

std::optional<std::string> AccessLogEntry::header(std::string_view name) const {
    const std::string wanted = detail::to_lower(name);
    for (const auto& [key, value] : headers)
        if (detail::to_lower(key) == wanted)
            return value;
    return std::nullopt;
}

std::string serialize(const AccessLogEntry& entry) {
    json headers = json::array();
    for (const auto& [name, value] : entry.headers)
        headers.push_back(json::array({name, value}));
    json j{{"ip", entry.ip},
           {"port", entry.port},
           {"method", entry.method},
           {"path", entry.path},
           {"headers", std::move(headers)},
           {"ts", format_iso(entry.received_at)},
           {"token", entry.token ? json(*entry.token) : json(nullptr)}};
    return detail::dump(j);
}

AccessLogEntry parse_log_line(std::string_view line) {
    return detail::parse_guard("access log line", [&] {
        const json j = json::parse(line);
        AccessLogEntry e;
        e.ip = j.at("ip").get<std::string>();
        e.port = j.at("port").get<int>();
        e.method = j.at("method").get<std::string>();
        e.path = j.at("path").get<std::string>();
        for (const json& h : j.at("headers")) {
            if (!h.is_array() || h.size() != 2)
                throw Error(Errc::ParseError, "header must be a [name, value] pair");
            e.headers.emplace_back(h[0].get<std::string>(), h[1].get<std::string>());
        }
        e.received_at = parse_iso_or_throw(j.at("ts").get<std::string>());
        if (!j.at("token").is_null())
            e.token = j.at("token").get<std::string>();
        return e;
    });
}

LogReadResult read_access_log(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::IoError, "cannot open access log " + path);
    LogReadResult out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        try {
            out.entries.push_back(parse_log_line(line));
        } catch (const Error&) {
            ++out.bad_lines;
        }
    }
    return out;
}

FileLogSink::FileLogSink(const std::string& path) : file_(std::fopen(path.c_str(), "ab")) {
    if (!file_)
        throw Error(Errc::IoError, "cannot open access log " + path + " for appending");
}

FileLogSink::~FileLogSink() {
    if (file_)
        std::fclose(file_);
}

bool FileLogSink::write_line(std::string_view line) {
    const bool ok = std::fwrite(line.data(), 1, line.size(), file_) == line.size() &&
                    std::fputc('\n', file_) != EOF && std::fflush(file_) == 0;
    return ok;
}

bool MemoryLogSink::write_line(std::string_view line) {
    std::lock_guard lock(mutex_);
    lines_.emplace_back(line);
    return true;
}

std::vector<std::string> MemoryLogSink::lines() const {
    std::lock_guard lock(mutex_);
    return lines_;
}

AccessLogEntry AccessLog::append(AccessLogEntry entry) {
    std::lock_guard lock(mutex_);
    if (last_ && entry.received_at < *last_)
        entry.received_at = *last_;
    last_ = entry.received_at;
    if (sink_ && sink_->write_line(serialize(entry)))
        ++written_;
    else
        ++failures_;
    return entry;
}

} // namespace honeysheets::honeylink
