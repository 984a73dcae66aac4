#include "detail.hpp"
#include "honeysheets/analytics.hpp"
#include "honeysheets/error.hpp"

#include <algorithm>
#include <set>

namespace honeysheets::analytics {

using nlohmann::json;

std::vector<DateRange> boundaries_from_json(const json& j) {
    return detail::parse_guard("boundaries", [&] {
        std::vector<DateRange> out;
        const json& list = j.is_object() ? j.at("windows") : j;
        for (const json& b : list) {
            DateRange r;
            r.name = b.at("name").get<std::string>();
            r.start = start_of_day(parse_iso_or_throw(b.at("start").get<std::string>()));
            if (b.contains("end"))
                r.end = start_of_day(parse_iso_or_throw(b.at("end").get<std::string>())) + std::chrono::days{1};
            else
                r.end = r.start + std::chrono::days{b.at("days").get<int>()};
            out.push_back(std::move(r));
        }
        return out;
    });
}

std::vector<DateRange> load_boundaries(const std::string& path) {
    return boundaries_from_json(detail::read_json_file(path));
}

std::uint64_t Counts::distinct_country_count() const {
    return static_cast<std::uint64_t>(std::count_if(country_histogram.begin(), country_histogram.end(), [](const auto& kv) {
        return kv.first != kUnknownCountry && kv.second > 0;
    }));
}

namespace {

struct Accumulator {
    Counts counts;
    std::set<std::string> ips;
    std::set<std::string> controlled_ips;

    void add_event(const sheetstore::SheetEvent& e) {
        if (e.kind == sheetstore::EventKind::Open) {
            ++counts.open_count;
        } else {
            ++counts.modification_count;
            const auto cls = e.modification_class ? *e.modification_class : sheetstore::classify(*e.changeset);
            ++counts.modification_class_histogram[std::string(sheetstore::to_string(cls))];
        }
    }

    void add_click(const honeylink::AccessLogEntry& entry, bool controlled, const std::string& country,
                   const honeylink::UserAgentClass& ua) {
        ++counts.click_count;
        ips.insert(entry.ip);
        if (controlled) {
            ++counts.controlled_link_visit_count;
            controlled_ips.insert(entry.ip);
        }
        ++counts.country_histogram[country];
        ++counts.browser_histogram[std::string(honeylink::to_string(ua.browser))];
        ++counts.os_histogram[std::string(honeylink::to_string(ua.os))];
    }

    Counts finish() {
        counts.unique_ip_count = ips.size();
        counts.controlled_unique_ip_count = controlled_ips.size();
        return counts;
    }
};

void check_boundaries(std::span<const DateRange> boundaries) {
    std::vector<const DateRange*> sorted;
    for (const DateRange& b : boundaries) {
        if (!(b.start < b.end))
            throw Error(Errc::BadBoundaries, "window '" + b.name + "' is empty");
        sorted.push_back(&b);
    }
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->start < b->start; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i]->start < sorted[i - 1]->end)
            throw Error(Errc::BadBoundaries, "windows '" + sorted[i - 1]->name + "' and '" + sorted[i]->name + "' overlap");
}

} // namespace

Report aggregate(const notify::EventTimeline& timeline, std::span<const honeylink::AccessLogEntry> logs,
                 const GeoTable& geo, std::span<const DateRange> boundaries,
                 const honeylink::LinkRegistry& registry) {
    check_boundaries(boundaries);

    Accumulator total;
    std::vector<Accumulator> windows(boundaries.size());
    auto window_of = [&](Timestamp t) -> Accumulator* {
        for (std::size_t i = 0; i < boundaries.size(); ++i)
            if (boundaries[i].start <= t && t < boundaries[i].end)
                return &windows[i];
        return nullptr;
    };

    for (const auto& e : timeline.events) {
        total.add_event(e);
        if (Accumulator* w = window_of(e.occurred_at))
            w->add_event(e);
    }

    for (const auto& entry : logs) {
        Accumulator* w = window_of(entry.received_at);
        if (!entry.token) {
            ++total.counts.unmatched_request_count;
            if (w)
                ++w->counts.unmatched_request_count;
            continue;
        }
        const honeylink::HoneyLink* link = registry.resolve(*entry.token);
        const bool controlled = link && link->target_class == honeylink::TargetClass::Controlled;
        const std::string country = geolocate(entry.ip, geo);
        const auto ua = honeylink::parse_user_agent(entry.header("User-Agent").value_or(""));
        total.add_click(entry, controlled, country, ua);
        if (w)
            w->add_click(entry, controlled, country, ua);
    }

    Report report;
    report.total = total.finish();
    for (std::size_t i = 0; i < boundaries.size(); ++i)
        report.windows.push_back(WindowReport{boundaries[i], windows[i].finish()});
    return report;
}

json to_json(const Counts& c) {
    return json{{"open_count", c.open_count},
                {"modification_count", c.modification_count},
                {"modification_class_histogram", c.modification_class_histogram},
                {"click_count", c.click_count},
                {"unique_ip_count", c.unique_ip_count},
                {"controlled_link_visit_count", c.controlled_link_visit_count},
                {"controlled_unique_ip_count", c.controlled_unique_ip_count},
                {"unmatched_request_count", c.unmatched_request_count},
                {"distinct_country_count", c.distinct_country_count()},
                {"country_histogram", c.country_histogram},
                {"browser_histogram", c.browser_histogram},
                {"os_histogram", c.os_histogram}};
}

json to_json(const Report& report) {
    json windows = json::array();
    for (const auto& w : report.windows) {
        json j = to_json(w.counts);
        j["name"] = w.range.name;
        j["start"] = format_iso(w.range.start);
        j["end"] = format_iso(w.range.end);
        windows.push_back(std::move(j));
    }
    return json{{"total", to_json(report.total)}, {"windows", std::move(windows)}};
}

std::string countries_csv(const Counts& counts) {
    std::vector<std::pair<std::string, std::uint64_t>> rows;
    for (const auto& [country, n] : counts.country_histogram)
        if (country != kUnknownCountry && n > 0)
            rows.emplace_back(country, n);
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    std::string out = "country,count\n";
    for (const auto& [country, n] : rows)
        out += country + "," + std::to_string(n) + "\n";
    return out;
}

void export_report(const Report& report, const std::filesystem::path& out_dir) {
    try {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec)
            throw Error(Errc::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
        detail::write_file(out_dir / "report.json", detail::dump(to_json(report), 2) + "\n");
        detail::write_file(out_dir / "countries.csv", countries_csv(report.total));
    } catch (const Error& e) {
        throw Error(Errc::ExportError, e.what());
    }
}

} // namespace honeysheets::analytics
