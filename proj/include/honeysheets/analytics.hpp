#pragma once

#include "honeysheets/honeylink.hpp"
#include "honeysheets/notify.hpp"
#include "honeysheets/time.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace honeysheets::analytics {

inline constexpr std::string_view kUnknownCountry = "unknown";

struct IpAddress {
    bool v6 = false;
    std::array<std::uint8_t, 16> bytes{}; // v4 uses the first 4

    std::size_t bit_width() const { return v6 ? 128 : 32; }
    bool bit(std::size_t i) const { return (bytes[i / 8] >> (7 - i % 8)) & 1U; }

    friend bool operator==(const IpAddress&, const IpAddress&) = default;
};

std::optional<IpAddress> parse_ip(std::string_view text);

struct CidrEntry {
    IpAddress network;
    std::size_t prefix_length = 0;
    std::string country;
};

/// Host bits beyond the prefix length are cleared. Throws Error(ParseError)
/// for malformed text or an out-of-range length.
CidrEntry parse_cidr(std::string_view cidr, std::string country);

/// Offline prefix -> country table with longest-prefix-match lookup. When the
/// same prefix is added twice the later entry wins.
class GeoTable {
public:
    /// Country must be an ISO-3166 alpha-2 code (two uppercase letters).
    void add(std::string_view cidr, std::string_view country);

    std::size_t size() const { return entries_.size(); }
    const std::vector<CidrEntry>& entries() const { return entries_; }

    /// Country of the longest matching prefix, or "unknown".
    std::string lookup(const IpAddress& ip) const;

    /// Reads `cidr,country` rows; a leading header row is skipped.
    static GeoTable load_csv(const std::filesystem::path& path);

private:
    struct Node {
        std::int32_t child[2] = {-1, -1};
        std::int32_t country = -1;
    };

    std::vector<Node>& trie(bool v6) { return v6 ? v6_ : v4_; }
    const std::vector<Node>& trie(bool v6) const { return v6 ? v6_ : v4_; }

    std::vector<CidrEntry> entries_;
    std::vector<std::string> countries_;
    std::vector<Node> v4_{Node{}};
    std::vector<Node> v6_{Node{}};
};

/// "unknown" also for unparsable addresses.
std::string geolocate(std::string_view ip, const GeoTable& table);

/// Half-open [start, end) window, typically whole UTC days.
struct DateRange {
    std::string name;
    Timestamp start;
    Timestamp end;
};

/// Reads `[{"name", "start": "YYYY-MM-DD", "end": "YYYY-MM-DD" (inclusive) | "days": N}]`.
std::vector<DateRange> load_boundaries(const std::string& path);
std::vector<DateRange> boundaries_from_json(const nlohmann::json& j);

using Histogram = std::map<std::string, std::uint64_t>;

struct Counts {
    std::uint64_t open_count = 0;
    std::uint64_t modification_count = 0;
    Histogram modification_class_histogram;
    /// Requests resolving to a minted token, over every link.
    std::uint64_t click_count = 0;
    /// Distinct source addresses among clicks.
    std::uint64_t unique_ip_count = 0;
    /// Clicks on links pointing at the controlled domain.
    std::uint64_t controlled_link_visit_count = 0;
    std::uint64_t controlled_unique_ip_count = 0;
    /// Logged requests that matched no token (scanners, probes).
    std::uint64_t unmatched_request_count = 0;
    /// Over clicks; includes the "unknown" bucket.
    Histogram country_histogram;
    Histogram browser_histogram;
    Histogram os_histogram;

    /// Countries with at least one click, excluding "unknown".
    std::uint64_t distinct_country_count() const;

    friend bool operator==(const Counts&, const Counts&) = default;
};

struct WindowReport {
    DateRange range;
    Counts counts;
};

struct Report {
    std::vector<WindowReport> windows;
    Counts total;
};

/// Joins sheet events and the access log into per-window and overall counts.
/// Throws Error(BadBoundaries) for empty or overlapping windows.
Report aggregate(const notify::EventTimeline& timeline, std::span<const honeylink::AccessLogEntry> logs,
                 const GeoTable& geo, std::span<const DateRange> boundaries,
                 const honeylink::LinkRegistry& registry);

nlohmann::json to_json(const Counts& counts);
nlohmann::json to_json(const Report& report);

/// `country,count` rows sorted by count descending, then code; "unknown" excluded.
std::string countries_csv(const Counts& counts);

/// Writes report.json and countries.csv. Throws Error(ExportError).
void export_report(const Report& report, const std::filesystem::path& out_dir);

} // namespace honeysheets::analytics
