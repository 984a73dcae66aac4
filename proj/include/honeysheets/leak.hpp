#pragma once

#include "honeysheets/rng.hpp"
#include "honeysheets/time.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace honeysheets::leak {

inline constexpr std::string_view kLinkPlaceholder = "{link}";

/// Persona used when publishing a share link. Construction validates that
/// there is at least one template and each contains `{link}` exactly once.
class Theme {
public:
    Theme(std::string name, std::vector<std::string> templates);

    const std::string& name() const { return name_; }
    const std::vector<std::string>& templates() const { return templates_; }

    /// Bragging attacker persona.
    static Theme hacker();
    /// Colleague accidentally sharing the sheet.
    static Theme naive();
    /// Throws Error(InvalidTheme) for unknown names.
    static Theme by_name(std::string_view name);

private:
    std::string name_;
    std::vector<std::string> templates_;
};

struct LeakPost {
    std::string theme;
    std::string rendered_text;
    std::string sheet_id;
    Timestamp scheduled_at;

    friend bool operator==(const LeakPost&, const LeakPost&) = default;
};

std::string render_post(const Theme& theme, std::string_view share_link, Rng& rng);

struct SheetRef {
    std::string sheet_id;
    std::string share_link;
};

struct Experiment {
    Theme theme;
    Timestamp start_date; // midnight UTC of the first day
    int days = 0;
    int posts_per_day = 0;
};

/// Time of day of the k-th of n daily posts: 09:00 and 21:00 UTC for n == 2,
/// otherwise evenly spaced from 09:00 and wrapped into the same day.
Duration daily_offset(int k, int posts_per_day);

/// days * posts_per_day posts sorted by time, sheets assigned round-robin in
/// that order. Throws Error(ConfigMismatch) for negative counts, or when posts
/// are due but no sheets are given.
std::vector<LeakPost> schedule(const Experiment& experiment, const std::vector<SheetRef>& sheets, Rng& rng);

/// Where rendered posts go. Publishing to a real paste site is deliberately
/// not provided.
class LeakSink {
public:
    virtual ~LeakSink() = default;
    /// Returns a receipt identifying the stored post.
    virtual std::string post(const LeakPost& post) = 0;
};

/// Writes each post to `<dir>/<compact-time>-<sheet_id>.txt`.
class FileLeakSink : public LeakSink {
public:
    explicit FileLeakSink(std::filesystem::path dir);
    std::string post(const LeakPost& post) override;

private:
    std::filesystem::path dir_;
};

} // namespace honeysheets::leak
