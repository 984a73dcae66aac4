#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace honeysheets {

/// UTC instant at microsecond resolution. Every persisted timestamp uses it.
using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;
using Duration = std::chrono::microseconds;

Timestamp now_utc();

/// "2016-01-23T09:00:00.000000Z"
std::string format_iso(Timestamp ts);

/// Basic ISO-8601 form without separators, safe for filenames: "20160123T090000.000000Z".
std::string format_iso_compact(Timestamp ts);

/// Accepts "YYYY-MM-DDTHH:MM:SS[.fraction]Z" and a bare "YYYY-MM-DD" (midnight UTC).
/// Fractions beyond microseconds are truncated.
std::optional<Timestamp> parse_iso(std::string_view text);

/// Like parse_iso but throws Error(ParseError).
Timestamp parse_iso_or_throw(std::string_view text);

/// "YYYY-MM-DD" of the UTC calendar day containing ts.
std::string format_date(Timestamp ts);

Timestamp start_of_day(Timestamp ts);

} // namespace honeysheets
