#include "honeysheets/leak.hpp"

#include "detail.hpp"
#include "honeysheets/error.hpp"

#include <algorithm>

namespace honeysheets::leak {

namespace {

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string_view::npos; pos = haystack.find(needle, pos + 1))
        ++n;
    return n;
}

} // namespace

Theme::Theme(std::string name, std::vector<std::string> templates)
    : name_(std::move(name)), templates_(std::move(templates)) {
    if (templates_.empty())
        throw Error(Errc::InvalidTheme, "theme '" + name_ + "' has no templates");
    for (const auto& t : templates_)
        if (count_occurrences(t, kLinkPlaceholder) != 1)
            throw Error(Errc::InvalidTheme, "template must contain {link} exactly once: '" + t + "'");
}

Theme Theme::hacker() {
    return Theme("hacker", {
                               "leaked corporate payments {link}",
                               "st0len payrolls {link}",
                               "fresh dump, payroll + IBANs of a UK firm, enjoy {link}",
                               "got into their finance drive lol. bank details inside {link}",
                               "corp payroll leak w/ sort codes, no pass needed {link}",
                               "who wants some bank accounts? full payroll here {link}",
                           });
}

Theme Theme::naive() {
    return Theme("naive", {
                              "Bob, here is the spreadsheet with payrolls for September {link}",
                              "Hi Alice, as discussed the payroll sheet is here: {link}",
                              "Team, please check your bank details before Friday's run {link}",
                              "Updated salary transfers for this month, let me know if anything is off {link}",
                              "Sharing the payments sheet so you can edit it directly {link}",
                          });
}

Theme Theme::by_name(std::string_view name) {
    if (name == "hacker")
        return hacker();
    if (name == "naive")
        return naive();
    throw Error(Errc::InvalidTheme, "unknown theme '" + std::string(name) + "'");
}

std::string render_post(const Theme& theme, std::string_view share_link, Rng& rng) {
    const auto& templates = theme.templates();
    std::string text = templates.size() == 1 ? templates.front() : templates[rng.below(templates.size())];
    text.replace(text.find(kLinkPlaceholder), kLinkPlaceholder.size(), share_link);
    return text;
}

Duration daily_offset(int k, int posts_per_day) {
    using namespace std::chrono;
    const auto first = hours{9};
    const auto step = duration_cast<Duration>(hours{24}) / posts_per_day;
    return duration_cast<Duration>((first + step * k) % hours{24});
}

std::vector<LeakPost> schedule(const Experiment& experiment, const std::vector<SheetRef>& sheets, Rng& rng) {
    if (experiment.days < 0 || experiment.posts_per_day < 0)
        throw Error(Errc::ConfigMismatch, "days and posts_per_day must be non-negative");
    const auto total = static_cast<std::size_t>(experiment.days) * static_cast<std::size_t>(experiment.posts_per_day);
    if (total == 0)
        return {};
    if (sheets.empty())
        throw Error(Errc::ConfigMismatch, "no sheets to leak");

    std::vector<Timestamp> slots;
    slots.reserve(total);
    const Timestamp day0 = start_of_day(experiment.start_date);
    for (int d = 0; d < experiment.days; ++d)
        for (int k = 0; k < experiment.posts_per_day; ++k)
            slots.push_back(day0 + std::chrono::days{d} + daily_offset(k, experiment.posts_per_day));
    std::sort(slots.begin(), slots.end());

    std::vector<LeakPost> posts;
    posts.reserve(total);
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const SheetRef& sheet = sheets[i % sheets.size()];
        posts.push_back(LeakPost{experiment.theme.name(), render_post(experiment.theme, sheet.share_link, rng),
                                 sheet.sheet_id, slots[i]});
    }
    return posts;
}

FileLeakSink::FileLeakSink(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec)
        throw Error(Errc::IoError, "cannot create " + dir_.string() + ": " + ec.message());
}

std::string FileLeakSink::post(const LeakPost& post) {
    const std::string name = format_iso_compact(post.scheduled_at) + "-" + post.sheet_id + ".txt";
    std::string content = "Theme: " + post.theme + "\n";
    content += "Sheet-ID: " + post.sheet_id + "\n";
    content += "Scheduled-At: " + format_iso(post.scheduled_at) + "\n\n";
    content += post.rendered_text + "\n";
    detail::write_file(dir_ / name, content);
    return (dir_ / name).string();
}

} // namespace honeysheets::leak
