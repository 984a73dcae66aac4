#include "honeysheets/notify.hpp"

#include "detail.hpp"
#include "honeysheets/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <random>
#include <tuple>

namespace honeysheets::notify {

namespace fs = std::filesystem;
using sheetstore::EventKind;

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string random_hex8() {
    thread_local std::mt19937 engine{std::random_device{}()};
    char buf[12];
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(engine()));
    return buf;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

[[noreturn]] void malformed(const std::string& why) {
    throw Error(Errc::ParseError, "notification: " + why);
}

} // namespace

std::string render_notification(const SheetEvent& event) {
    sheetstore::check_invariants(event);
    if (event.sheet_id.find_first_of("\r\n") != std::string::npos)
        throw Error(Errc::ConfigMismatch, "sheet id contains a line break");

    const std::string body = event.changeset ? sheetstore::serialize(*event.changeset) : std::string();
    std::string out;
    out += "Subject: [honeysheet] " + std::string(to_string(event.kind)) + " on " + event.sheet_id + "\n";
    out += "Sheet-ID: " + event.sheet_id + "\n";
    out += "Event-Type: " + std::string(to_string(event.kind)) + "\n";
    if (event.modification_class)
        out += "Modification-Class: " + std::string(to_string(*event.modification_class)) + "\n";
    out += "Occurred-At: " + format_iso(event.occurred_at) + "\n";
    if (event.snapshot_at)
        out += "Snapshot-At: " + format_iso(*event.snapshot_at) + "\n";
    out += "Content-Length: " + std::to_string(body.size()) + "\n";
    out += "\n";
    out += body;
    return out;
}

SheetEvent parse_notification(std::string_view text) {
    const auto split = text.find("\n\n");
    if (split == std::string_view::npos)
        malformed("missing header/body separator");
    std::string_view head = text.substr(0, split + 1);
    const std::string_view body = text.substr(split + 2);

    std::map<std::string, std::string> headers;
    while (!head.empty()) {
        const auto eol = head.find('\n');
        std::string_view line = head.substr(0, eol);
        head.remove_prefix(eol == std::string_view::npos ? head.size() : eol + 1);
        const auto colon = line.find(':');
        if (colon == std::string_view::npos)
            malformed("header line without ':'");
        const std::string name = detail::to_lower(trim(line.substr(0, colon)));
        if (!headers.emplace(name, std::string(trim(line.substr(colon + 1)))).second)
            malformed("duplicate header " + name);
    }

    auto required = [&](const char* name) -> const std::string& {
        auto it = headers.find(name);
        if (it == headers.end())
            malformed(std::string("missing ") + name);
        return it->second;
    };

    const std::string& length_text = required("content-length");
    std::size_t length = 0;
    auto [p, ec] = std::from_chars(length_text.data(), length_text.data() + length_text.size(), length);
    if (ec != std::errc{} || p != length_text.data() + length_text.size())
        malformed("bad Content-Length");
    if (body.size() != length)
        malformed("body is " + std::to_string(body.size()) + " bytes, expected " + std::to_string(length));

    SheetEvent event;
    event.sheet_id = required("sheet-id");
    event.kind = sheetstore::event_kind_from_string(required("event-type"));
    event.occurred_at = parse_iso_or_throw(required("occurred-at"));
    if (auto it = headers.find("snapshot-at"); it != headers.end())
        event.snapshot_at = parse_iso_or_throw(it->second);
    if (auto it = headers.find("modification-class"); it != headers.end())
        event.modification_class = sheetstore::modification_class_from_string(it->second);
    if (!body.empty()) {
        event.changeset = detail::parse_guard("notification body", [&] {
            return sheetstore::changeset_from_json(nlohmann::json::parse(body));
        });
    }
    try {
        sheetstore::check_invariants(event);
    } catch (const Error& e) {
        malformed(e.what());
    }
    return event;
}

std::string emit_notification(const SheetEvent& event, const fs::path& mailbox_dir) {
    const std::string text = render_notification(event);

    std::error_code ec;
    fs::create_directories(mailbox_dir / "tmp", ec);
    if (ec)
        throw Error(Errc::MailboxError, "cannot prepare " + mailbox_dir.string() + ": " + ec.message());

    const std::string stamp = format_iso_compact(event.occurred_at);
    for (int attempt = 0; attempt < 16; ++attempt) {
        const std::string name = stamp + "-" + random_hex8() + ".msg";
        const fs::path tmp = mailbox_dir / "tmp" / name;
        {
            std::FILE* f = std::fopen(tmp.c_str(), "wbx");
            if (!f) {
                if (fs::exists(tmp))
                    continue;
                throw Error(Errc::MailboxError, "cannot write into " + mailbox_dir.string());
            }
            const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
            const bool closed = std::fclose(f) == 0;
            if (!ok || !closed) {
                fs::remove(tmp, ec);
                throw Error(Errc::MailboxError, "short write into " + mailbox_dir.string());
            }
        }
        // A hard link never replaces an existing message, unlike rename.
        fs::create_hard_link(tmp, mailbox_dir / name, ec);
        fs::remove(tmp);
        if (!ec)
            return name;
        if (ec != std::errc::file_exists)
            throw Error(Errc::MailboxError, "cannot deliver " + name + ": " + ec.message());
    }
    throw Error(Errc::MailboxError, "could not find a free message name");
}

std::uint64_t changeset_hash(const SheetEvent& event) {
    return event.changeset ? fnv1a(sheetstore::serialize(*event.changeset)) : 0;
}

std::size_t EventTimeline::count(EventKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [kind](const SheetEvent& e) { return e.kind == kind; }));
}

EventTimeline make_timeline(std::vector<SheetEvent> events) {
    struct Keyed {
        std::uint64_t hash;
        SheetEvent event;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(events.size());
    for (auto& e : events)
        keyed.push_back({changeset_hash(e), std::move(e)});

    auto dedupe_key = [](const Keyed& k) {
        return std::tie(k.event.occurred_at, k.event.sheet_id, k.event.kind, k.hash);
    };
    std::sort(keyed.begin(), keyed.end(), [&](const Keyed& a, const Keyed& b) {
        if (dedupe_key(a) != dedupe_key(b))
            return dedupe_key(a) < dedupe_key(b);
        // Total order for messages that only differ outside the dedupe key.
        return std::tie(a.event.snapshot_at, a.event.modification_class) <
               std::tie(b.event.snapshot_at, b.event.modification_class);
    });
    auto last = std::unique(keyed.begin(), keyed.end(),
                            [&](const Keyed& a, const Keyed& b) { return dedupe_key(a) == dedupe_key(b); });
    keyed.erase(last, keyed.end());

    EventTimeline out;
    out.events.reserve(keyed.size());
    for (auto& k : keyed)
        out.events.push_back(std::move(k.event));
    return out;
}

IngestResult ingest_mailbox(const fs::path& mailbox_dir) {
    IngestResult result;
    std::error_code ec;
    if (!fs::exists(mailbox_dir, ec))
        return result;

    std::vector<SheetEvent> events;
    std::vector<fs::path> bad;
    for (const auto& entry : fs::directory_iterator(mailbox_dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".msg")
            continue;
        try {
            events.push_back(parse_notification(detail::read_file(entry.path())));
        } catch (const Error&) {
            bad.push_back(entry.path());
        }
    }

    if (!bad.empty()) {
        const fs::path quarantine = mailbox_dir / "bad";
        fs::create_directories(quarantine, ec);
        for (const fs::path& p : bad) {
            fs::path target = quarantine / p.filename();
            for (int n = 1; fs::exists(target); ++n)
                target = quarantine / (p.filename().string() + "." + std::to_string(n));
            fs::rename(p, target, ec);
            ++result.quarantined;
        }
    }
    result.timeline = make_timeline(std::move(events));
    return result;
}

nlohmann::json to_json(const EventTimeline& timeline) {
    nlohmann::json events = nlohmann::json::array();
    for (const SheetEvent& e : timeline.events)
        events.push_back(sheetstore::to_json(e));
    return nlohmann::json{{"events", std::move(events)}};
}

EventTimeline timeline_from_json(const nlohmann::json& j) {
    return detail::parse_guard("timeline", [&] {
        std::vector<SheetEvent> events;
        for (const auto& e : j.at("events"))
            events.push_back(sheetstore::sheet_event_from_json(e));
        return make_timeline(std::move(events));
    });
}

EventTimeline load_timeline(const std::string& path) {
    return timeline_from_json(detail::read_json_file(path));
}

void save_timeline(const EventTimeline& timeline, const std::string& path, std::size_t quarantined) {
    nlohmann::json j = to_json(timeline);
    j["quarantined"] = quarantined;
    detail::write_file(path, detail::dump(j, 1) + "\n");
}

} // namespace honeysheets::notify
