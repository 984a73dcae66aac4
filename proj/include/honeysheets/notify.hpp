#pragma once

#include "honeysheets/sheetstore.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace honeysheets::notify {

using sheetstore::SheetEvent;

// Wire format (one message per file):
//
//   Subject: [honeysheet] modification on hs-0123
//   Sheet-ID: hs-0123
//   Event-Type: modification
//   Modification-Class: content
//   Occurred-At: 2016-01-24T10:15:00.000000Z
//   Snapshot-At: 2016-01-24T12:00:00.000000Z
//   Content-Length: 412
//
//   {"cell_changes":[...],...}
//
// Open events have Content-Length 0 and no body. Content-Length lets the
// parser reject truncated deliveries.

/// Throws Error(ConfigMismatch) for events violating SheetEvent invariants or
/// a sheet id containing line breaks.
std::string render_notification(const SheetEvent& event);

/// Throws Error(ParseError) on any malformed or truncated message.
SheetEvent parse_notification(std::string_view text);

/// Writes the message under a unique `<compact-ISO>-<8 hex>.msg` name via
/// tmp/ + link, so readers never see a partial file. Returns the file name.
/// Throws Error(MailboxError) when the directory cannot be written.
std::string emit_notification(const SheetEvent& event, const std::filesystem::path& mailbox_dir);

/// FNV-1a over the canonical ChangeSet text (0 when absent).
std::uint64_t changeset_hash(const SheetEvent& event);

/// Events ordered by occurred_at, then sheet id, then open before
/// modification; duplicates of (sheet, time, kind, changeset hash) removed.
struct EventTimeline {
    std::vector<SheetEvent> events;

    std::size_t count(sheetstore::EventKind kind) const;

    friend bool operator==(const EventTimeline&, const EventTimeline&) = default;
};

EventTimeline make_timeline(std::vector<SheetEvent> events);

struct IngestResult {
    EventTimeline timeline;
    std::size_t quarantined = 0;
};

/// Parses every *.msg file in the directory. Malformed messages are moved to
/// `bad/` and counted; they never abort ingestion.
IngestResult ingest_mailbox(const std::filesystem::path& mailbox_dir);

nlohmann::json to_json(const EventTimeline& timeline);
EventTimeline timeline_from_json(const nlohmann::json& j);
EventTimeline load_timeline(const std::string& path);
void save_timeline(const EventTimeline& timeline, const std::string& path, std::size_t quarantined = 0);

} // namespace honeysheets::notify
