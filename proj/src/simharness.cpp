#include "honeysheets/simharness.hpp"

#include "detail.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

namespace honeysheets::simharness {

using json = nlohmann::json;
using honeylink::LinkRegistry;
using honeylink::TargetClass;
using sheetstore::EditCommand;
using sheetstore::HoneySheet;

namespace {

constexpr std::array kBehaviors{Behavior::OpenOnly, Behavior::ExpandColumns, Behavior::DeleteContent,
                                Behavior::Deface, Behavior::ClickLinks};
constexpr std::array kModifying{Behavior::ExpandColumns, Behavior::DeleteContent, Behavior::Deface};

constexpr std::array<std::string_view, 8> kUserAgents{
    "Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/48.0.2564.116 "
    "Safari/537.36",
    "Mozilla/5.0 (Windows NT 6.1; WOW64; rv:44.0) Gecko/20100101 Firefox/44.0",
    "Mozilla/5.0 (X11; Linux x86_64) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/48.0.2564.109 Safari/537.36",
    "Mozilla/5.0 (X11; Ubuntu; Linux x86_64; rv:43.0) Gecko/20100101 Firefox/43.0",
    "Mozilla/5.0 (Macintosh; Intel Mac OS X 10_11_3) AppleWebKit/601.4.4 (KHTML, like Gecko) Version/9.0.3 "
    "Safari/601.4.4",
    "Mozilla/5.0 (Macintosh; Intel Mac OS X 10_10_5) AppleWebKit/537.36 (KHTML, like Gecko) Chrome/48.0.2564.103 "
    "Safari/537.36",
    "Mozilla/5.0 (Linux; Android 5.0.2; SAMSUNG SM-G920F Build/LRX22G) AppleWebKit/537.36 (KHTML, like Gecko) "
    "SamsungBrowser/3.3 Chrome/38.0.2125.102 Mobile Safari/537.36",
    "Mozilla/5.0 (Linux; Android 6.0; Nexus 5 Build/MRA58N) AppleWebKit/537.36 (KHTML, like Gecko) "
    "Chrome/48.0.2564.95 Mobile Safari/537.36",
};

constexpr std::array<std::string_view, 6> kVandalText{"HACKED XD", "lol nice try", "FAKE!!!", "\\PWNED",
                                                      "go away", "owned owned owned"};
constexpr std::array<int, 7> kDefaceFontSizes{6, 8, 14, 18, 24, 36, 48};

[[noreturn]] void infeasible(const std::string& what) { throw Error(Errc::InfeasibleTargets, what); }

std::vector<std::string> ip_pool(std::string_view prefix, int first, int count) {
    std::vector<std::string> out;
    for (int i = 0; i < count; ++i)
        out.push_back(std::string(prefix) + std::to_string(first + i));
    return out;
}

std::vector<std::string> all_user_agents() { return {kUserAgents.begin(), kUserAgents.end()}; }

Timestamp offset(Timestamp base, std::int64_t seconds) { return base + std::chrono::seconds{seconds}; }

/// Index drawn proportionally to weights; -1 when every weight is zero.
int weighted(Rng& rng, const std::vector<double>& weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0))
        return -1;
    double x = rng.unit() * total;
    int last = -1;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0)
            continue;
        last = static_cast<int>(i);
        if (x < weights[i])
            return last;
        x -= weights[i];
    }
    return last;
}

Behavior draw_behavior(Rng& rng, const VisitorProfile& p, std::span<const Behavior> among) {
    std::vector<double> w;
    for (auto b : among)
        w.push_back(p.mass(b));
    const int i = weighted(rng, w);
    return i < 0 ? among.front() : among[static_cast<std::size_t>(i)];
}

/// Knuth's multiplication method; fine for the small means used here.
std::uint64_t poisson(Rng& rng, double mean) {
    if (mean <= 0.0)
        return 0;
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = rng.unit();
    while (p > limit) {
        ++k;
        p *= rng.unit();
    }
    return k;
}

std::string pick_ua(Rng& rng, const VisitorProfile& p) {
    if (p.user_agent_pool.empty())
        return std::string(kUserAgents[rng.below(kUserAgents.size())]);
    return rng.pick(std::span<const std::string>(p.user_agent_pool));
}

int pick_port(Rng& rng) { return static_cast<int>(rng.between(1024, 65535)); }

struct Builder {
    const std::vector<VisitorProfile>& profiles;
    std::span<const HoneySheet> sheets;
    const LinkRegistry& registry;
    Rng& rng;
    std::vector<TraceAction> actions;
    // Notifications are deduplicated on (sheet, time, kind), so no two sheet
    // events may share all three.
    std::set<std::tuple<std::string, Timestamp, ActionKind>> taken{};

    Timestamp free_slot(const std::string& sheet, Timestamp at, ActionKind kind) {
        while (!taken.emplace(sheet, at, kind).second)
            at += std::chrono::microseconds{1};
        return at;
    }

    const HoneySheet& any_sheet() { return sheets[rng.below(sheets.size())]; }

    /// Open plus, when the behavior modifies, a Modify shortly after.
    void visit(Timestamp at, const VisitorProfile& p, const std::string& ip, Behavior b, const HoneySheet& sheet) {
        TraceAction open;
        open.at = free_slot(sheet.sheet_id, at, ActionKind::Open);
        open.visitor = ip;
        open.profile = p.name;
        open.sheet_id = sheet.sheet_id;
        open.kind = ActionKind::Open;
        open.behavior = b;
        open.ip = ip;
        open.port = pick_port(rng);
        open.user_agent = pick_ua(rng, p);
        actions.push_back(open);
        if (is_modifying(b)) {
            TraceAction mod = open;
            mod.kind = ActionKind::Modify;
            mod.at = free_slot(sheet.sheet_id, offset(open.at, rng.between(60, 1800)), ActionKind::Modify);
            actions.push_back(std::move(mod));
        }
    }

    void click(Timestamp at, const VisitorProfile& p, const std::string& ip, const honeylink::HoneyLink& link) {
        TraceAction a;
        a.at = at;
        a.visitor = ip;
        a.profile = p.name;
        a.sheet_id = link.sheet_id;
        a.kind = ActionKind::Click;
        a.behavior = Behavior::ClickLinks;
        a.token = link.token;
        a.channel = link.target_class == TargetClass::Controlled ? Channel::Controlled : Channel::Shortener;
        a.ip = ip;
        a.port = pick_port(rng);
        a.user_agent = pick_ua(rng, p);
        actions.push_back(std::move(a));
    }
};

std::vector<honeylink::HoneyLink> sheet_links(const LinkRegistry& registry, std::span<const HoneySheet> sheets) {
    std::vector<honeylink::HoneyLink> out;
    for (const auto& s : sheets) {
        auto links = registry.links_for(s.sheet_id);
        out.insert(out.end(), links.begin(), links.end());
    }
    return out;
}

void unconstrained(Builder& b, const SimulationSettings& settings) {
    for (int day = 0; day < settings.duration_days; ++day) {
        const Timestamp day_start = offset(settings.start, std::int64_t{day} * 86400);
        for (const auto& p : b.profiles) {
            const auto visits = poisson(b.rng, p.visits_per_day);
            for (std::uint64_t v = 0; v < visits; ++v) {
                const Timestamp at = offset(day_start, b.rng.between(0, 86400 - 3600 - 1));
                const auto& sheet = b.any_sheet();
                const auto& ip = b.rng.pick(std::span<const std::string>(p.source_ip_pool));
                const Behavior beh = draw_behavior(b.rng, p, kBehaviors);
                b.visit(at, p, ip, beh, sheet);
                if (beh != Behavior::ClickLinks)
                    continue;
                const auto links = b.registry.links_for(sheet.sheet_id);
                if (links.empty())
                    continue;
                const auto n = b.rng.between(p.clicks_per_visit.min, p.clicks_per_visit.max);
                Timestamp t = at;
                for (std::int64_t k = 0; k < n; ++k) {
                    t = offset(t, b.rng.between(10, 600));
                    b.click(t, p, ip, links[b.rng.below(links.size())]);
                }
            }
        }
    }
}

void check_window(const WindowTargets& w, const SimulationSettings& s) {
    const std::string name = w.name.empty() ? format_date(w.start) : w.name;
    if (w.days < 0)
        infeasible("window " + name + " has negative length");
    if (w.modifications > w.opens)
        infeasible("window " + name + ": modifications exceed opens");
    if (w.controlled_clicks > w.clicks)
        infeasible("window " + name + ": controlled clicks exceed clicks");
    if (w.days == 0 && (w.opens > 0 || w.clicks > 0))
        infeasible("window " + name + " is empty but has targets");
    const Timestamp run_end = offset(s.start, std::int64_t{s.duration_days} * 86400);
    const Timestamp w_end = offset(w.start, std::int64_t{w.days} * 86400);
    if (w.start < s.start || w_end > run_end)
        infeasible("window " + name + " lies outside the simulated period");
}

struct ClickSlot {
    Timestamp at;
    TargetClass cls;
    std::string ip;
};

void constrained(Builder& b, const SimulationSettings& settings, const TargetCounts& targets) {
    auto& rng = b.rng;
    const auto& profiles = b.profiles;

    for (std::size_t i = 0; i < targets.windows.size(); ++i) {
        check_window(targets.windows[i], settings);
        for (std::size_t j = 0; j < i; ++j) {
            const auto& a = targets.windows[i];
            const auto& c = targets.windows[j];
            if (a.start < offset(c.start, std::int64_t{c.days} * 86400) &&
                c.start < offset(a.start, std::int64_t{a.days} * 86400))
                infeasible("target windows overlap");
        }
    }

    std::vector<double> visit_w, modify_w, click_w;
    for (const auto& p : profiles) {
        visit_w.push_back(p.visits_per_day > 0 ? p.visits_per_day : 0.0);
        modify_w.push_back(p.modifying_mass() * std::max(p.visits_per_day, 1e-6));
        click_w.push_back(p.mass(Behavior::ClickLinks) * std::max(p.visits_per_day, 1e-6));
    }
    if (std::all_of(visit_w.begin(), visit_w.end(), [](double w) { return w <= 0.0; }))
        std::fill(visit_w.begin(), visit_w.end(), 1.0);

    std::uint64_t total_clicks = 0, total_controlled = 0;
    for (const auto& w : targets.windows) {
        total_clicks += w.clicks;
        total_controlled += w.controlled_clicks;
        if (w.modifications > 0 && weighted(rng, modify_w) < 0)
            infeasible("no profile performs modifications");
    }

    const auto links = sheet_links(b.registry, b.sheets);
    std::vector<honeylink::HoneyLink> controlled, decoy;
    for (const auto& l : links)
        (l.target_class == TargetClass::Controlled ? controlled : decoy).push_back(l);
    if (total_controlled > 0 && controlled.empty())
        infeasible("controlled clicks requested but the sheets carry no controlled links");
    if (total_clicks > total_controlled && decoy.empty())
        infeasible("decoy clicks requested but the sheets carry no decoy links");
    if (total_clicks > 0 && weighted(rng, click_w) < 0)
        infeasible("no profile clicks links");

    // Opens and modifications.
    for (const auto& w : targets.windows) {
        std::vector<bool> modifies(w.opens, false);
        std::fill_n(modifies.begin(), w.modifications, true);
        rng.shuffle(modifies);
        const std::int64_t span_s = std::int64_t{w.days} * 86400 - 3600;
        for (std::uint64_t i = 0; i < w.opens; ++i) {
            const Timestamp at = offset(w.start, rng.between(0, std::max<std::int64_t>(span_s, 1) - 1));
            const auto& p = profiles[static_cast<std::size_t>(weighted(rng, modifies[i] ? modify_w : visit_w))];
            const Behavior beh = modifies[i] ? draw_behavior(rng, p, kModifying) : Behavior::OpenOnly;
            const auto& ip = rng.pick(std::span<const std::string>(p.source_ip_pool));
            b.visit(at, p, ip, beh, b.any_sheet());
        }
    }

    // Clicks.
    std::vector<ClickSlot> slots;
    for (const auto& w : targets.windows) {
        for (std::uint64_t i = 0; i < w.clicks; ++i) {
            const Timestamp at = offset(w.start, rng.between(0, std::int64_t{w.days} * 86400 - 1));
            slots.push_back({at, i < w.controlled_clicks ? TargetClass::Controlled : TargetClass::DecoyBank, {}});
        }
    }

    std::vector<std::size_t> clickers;
    for (std::size_t i = 0; i < profiles.size(); ++i)
        if (click_w[i] > 0.0)
            clickers.push_back(i);

    if (targets.unique_click_ips && total_clicks > 0) {
        const auto k = *targets.unique_click_ips;
        std::set<std::string> pool_set;
        for (auto i : clickers)
            pool_set.insert(profiles[i].source_ip_pool.begin(), profiles[i].source_ip_pool.end());
        std::vector<std::string> pool(pool_set.begin(), pool_set.end());
        if (k == 0)
            infeasible("unique_click_ips is zero but clicks were requested");
        if (k > pool.size())
            infeasible("unique_click_ips exceeds the clicking profiles' address pools");
        if (k > total_controlled)
            infeasible("unique_click_ips exceeds the number of controlled clicks");
        if (k > total_clicks)
            infeasible("unique_click_ips exceeds the number of clicks");
        rng.shuffle(pool);
        pool.resize(k);

        std::vector<std::size_t> ctrl_idx;
        for (std::size_t i = 0; i < slots.size(); ++i)
            if (slots[i].cls == TargetClass::Controlled)
                ctrl_idx.push_back(i);
        rng.shuffle(ctrl_idx);
        for (std::size_t i = 0; i < ctrl_idx.size(); ++i)
            slots[ctrl_idx[i]].ip = i < pool.size() ? pool[i] : pool[rng.below(pool.size())];
        for (auto& s : slots)
            if (s.ip.empty())
                s.ip = pool[rng.below(pool.size())];
    } else if (targets.unique_click_ips && *targets.unique_click_ips != 0) {
        infeasible("unique_click_ips requested without clicks");
    }

    for (const auto& s : slots) {
        std::size_t pi;
        if (s.ip.empty()) {
            pi = static_cast<std::size_t>(weighted(rng, click_w));
        } else {
            std::vector<double> w(profiles.size(), 0.0);
            for (auto i : clickers)
                if (std::find(profiles[i].source_ip_pool.begin(), profiles[i].source_ip_pool.end(), s.ip) !=
                    profiles[i].source_ip_pool.end())
                    w[i] = click_w[i];
            pi = static_cast<std::size_t>(weighted(rng, w));
        }
        const auto& p = profiles[pi];
        const std::string ip =
            s.ip.empty() ? rng.pick(std::span<const std::string>(p.source_ip_pool)) : s.ip;
        const auto& candidates = s.cls == TargetClass::Controlled ? controlled : decoy;
        b.click(s.at, p, ip, candidates[rng.below(candidates.size())]);
    }
}

// --- edit concretization ----------------------------------------------------

std::optional<std::size_t> column_named(const HoneySheet& s, std::string_view name) {
    if (s.grid.empty())
        return std::nullopt;
    for (std::size_t c = 0; c < s.column_count(); ++c)
        if (s.grid[0][c].value == name)
            return c;
    return std::nullopt;
}

bool is_link_cell(const LinkRegistry& registry, const std::string& value) {
    const std::string prefix = "https://" + registry.controlled_domain() + "/t/";
    return value.rfind(prefix, 0) == 0;
}

std::vector<std::size_t> link_columns(const LinkRegistry& registry, const HoneySheet& s) {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < s.column_count(); ++c)
        for (const auto& row : s.grid)
            if (is_link_cell(registry, row[c].value)) {
                out.push_back(c);
                break;
            }
    return out;
}

std::vector<EditCommand> expand_edits(Rng& rng, const LinkRegistry& registry, const HoneySheet& s) {
    if (s.column_count() == 0)
        return {};
    const auto preferred = link_columns(registry, s);
    const auto n = rng.between(1, std::min<std::int64_t>(2, static_cast<std::int64_t>(s.column_count())));
    std::vector<EditCommand> out;
    std::set<std::size_t> used;
    for (std::int64_t i = 0; i < n; ++i) {
        std::size_t col = (!preferred.empty() && rng.chance(0.7)) ? preferred[rng.below(preferred.size())]
                                                                  : rng.below(s.column_count());
        if (!used.insert(col).second)
            continue;
        out.emplace_back(sheetstore::SetColumnWidth{col, s.column_widths[col] + static_cast<int>(rng.between(40, 200))});
    }
    return out;
}

std::vector<EditCommand> delete_edits(Rng& rng, const HoneySheet& s) {
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    if (auto iban = column_named(s, "IBAN")) {
        for (std::size_t r = 1; r < s.row_count(); ++r)
            if (!s.grid[r][*iban].value.empty())
                candidates.emplace_back(r, *iban);
    }
    if (candidates.empty()) {
        for (std::size_t r = 0; r < s.row_count(); ++r)
            for (std::size_t c = 0; c < s.column_count(); ++c)
                if (!s.grid[r][c].value.empty())
                    candidates.emplace_back(r, c);
    }
    if (candidates.empty())
        return {};
    rng.shuffle(candidates);
    const auto n = std::min<std::size_t>(candidates.size(), rng.chance(0.75) ? 1 : 2);
    std::vector<EditCommand> out;
    for (std::size_t i = 0; i < n; ++i)
        out.emplace_back(sheetstore::SetValue{candidates[i].first, candidates[i].second, ""});
    return out;
}

sheetstore::Rgb random_colour(Rng& rng) {
    return {static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
            static_cast<std::uint8_t>(rng.below(256))};
}

std::string random_short_url(Rng& rng) {
    std::string code;
    for (int i = 0; i < 6; ++i)
        code += honeylink::kTokenAlphabet[rng.below(honeylink::kTokenAlphabet.size())];
    return "https://short.example.net/" + code;
}

std::vector<EditCommand> deface_edits(Rng& rng, const LinkRegistry& registry, const HoneySheet& s) {
    if (s.row_count() == 0 || s.column_count() == 0)
        return {};
    const int current = s.grid[0][0].format.font_size;
    int size;
    do {
        size = kDefaceFontSizes[rng.below(kDefaceFontSizes.size())];
    } while (size == current);
    const sheetstore::CellFormat fmt{size, random_colour(rng), random_colour(rng)};

    std::vector<EditCommand> out;
    for (std::size_t r = 0; r < s.row_count(); ++r)
        for (std::size_t c = 0; c < s.column_count(); ++c)
            out.emplace_back(sheetstore::SetFormat{r, c, fmt});

    const std::string replacement = random_short_url(rng);
    for (std::size_t r = 0; r < s.row_count(); ++r)
        for (std::size_t c = 0; c < s.column_count(); ++c)
            if (is_link_cell(registry, s.grid[r][c].value))
                out.emplace_back(sheetstore::SetValue{r, c, replacement});

    const std::string text(kVandalText[rng.below(kVandalText.size())]);
    const std::size_t r = rng.below(s.row_count());
    const std::size_t c = rng.below(s.column_count());
    out.emplace_back(sheetstore::SetValue{r, c, s.grid[r][c].value == text ? text + "!" : text});
    return out;
}

std::vector<EditCommand> edits_for(Behavior b, Rng& rng, const LinkRegistry& registry, const HoneySheet& s) {
    switch (b) {
    case Behavior::ExpandColumns:
        return expand_edits(rng, registry, s);
    case Behavior::DeleteContent:
        return delete_edits(rng, s);
    case Behavior::Deface:
        return deface_edits(rng, registry, s);
    default:
        return {};
    }
}

/// Fills in edit commands in time order against shadow sheets, so each edit
/// sees the state left by earlier ones.
void concretize(std::vector<TraceAction>& actions, std::span<const HoneySheet> sheets, const LinkRegistry& registry,
                Rng& rng) {
    std::map<std::string, HoneySheet> shadow;
    for (const auto& s : sheets)
        shadow.emplace(s.sheet_id, s);
    for (auto& a : actions) {
        if (a.kind != ActionKind::Modify)
            continue;
        auto& sheet = shadow.at(a.sheet_id);
        Behavior b = a.behavior;
        for (int attempt = 0; attempt < 3; ++attempt) {
            auto edits = edits_for(b, rng, registry, sheet);
            HoneySheet next = sheet;
            for (const auto& e : edits)
                sheetstore::apply_edit_in_place(next, e);
            if (!edits.empty() && next != sheet) {
                a.edits = std::move(edits);
                a.behavior = b;
                sheet = std::move(next);
                break;
            }
            // Nothing left to delete or deface; widening a column always works.
            b = Behavior::ExpandColumns;
        }
        if (a.edits.empty())
            infeasible("sheet " + a.sheet_id + " offers nothing to modify");
    }
}

} // namespace

// --- public ------------------------------------------------------------------

std::string_view to_string(Behavior b) {
    switch (b) {
    case Behavior::OpenOnly:
        return "open_only";
    case Behavior::ExpandColumns:
        return "expand_columns";
    case Behavior::DeleteContent:
        return "delete_content";
    case Behavior::Deface:
        return "deface";
    case Behavior::ClickLinks:
        return "click_links";
    }
    return "open_only";
}

Behavior behavior_from_string(std::string_view s) {
    for (auto b : kBehaviors)
        if (to_string(b) == s)
            return b;
    throw Error(Errc::ParseError, "unknown behavior: " + std::string(s));
}

bool is_modifying(Behavior b) {
    return b == Behavior::ExpandColumns || b == Behavior::DeleteContent || b == Behavior::Deface;
}

std::string_view to_string(ActionKind k) {
    switch (k) {
    case ActionKind::Open:
        return "open";
    case ActionKind::Modify:
        return "modify";
    case ActionKind::Click:
        return "click";
    }
    return "open";
}

std::string_view to_string(Channel c) { return c == Channel::Controlled ? "controlled" : "shortener"; }

double VisitorProfile::mass(Behavior b) const {
    const auto it = action_mix.find(b);
    return it == action_mix.end() ? 0.0 : it->second;
}

double VisitorProfile::modifying_mass() const {
    double m = 0.0;
    for (auto b : kModifying)
        m += mass(b);
    return m;
}

void check_invariants(const VisitorProfile& p) {
    auto bad = [&](const std::string& what) { throw Error(Errc::InvalidProfile, p.name + ": " + what); };
    double sum = 0.0;
    for (const auto& [b, v] : p.action_mix) {
        if (!(v >= 0.0 && v <= 1.0))
            bad("probability for " + std::string(to_string(b)) + " outside [0, 1]");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        bad("action mix sums to " + std::to_string(sum));
    if (p.source_ip_pool.empty())
        bad("empty source_ip_pool");
    if (p.clicks_per_visit.min < 0 || p.clicks_per_visit.min > p.clicks_per_visit.max)
        bad("invalid clicks_per_visit range");
    if (!(p.visits_per_day >= 0.0) || !std::isfinite(p.visits_per_day))
        bad("visits_per_day must be a finite non-negative number");
}

std::vector<VisitorProfile> default_profiles() {
    using B = Behavior;
    std::vector<VisitorProfile> out;
    out.push_back({"curious", {{B::OpenOnly, 1.0}}, {1, 1}, 1.5, ip_pool("192.0.2.", 10, 40), all_user_agents()});
    out.push_back({"lurker",
                   {{B::OpenOnly, 0.6}, {B::ExpandColumns, 0.4}},
                   {1, 1},
                   0.3,
                   ip_pool("192.0.2.", 100, 20),
                   all_user_agents()});
    out.push_back({"deleter",
                   {{B::OpenOnly, 0.7}, {B::DeleteContent, 0.3}},
                   {1, 1},
                   0.1,
                   ip_pool("198.51.100.", 10, 10),
                   all_user_agents()});
    out.push_back({"vandal",
                   {{B::OpenOnly, 0.8}, {B::Deface, 0.2}},
                   {1, 1},
                   0.05,
                   ip_pool("198.51.100.", 50, 5),
                   all_user_agents()});
    out.push_back({"prober",
                   {{B::OpenOnly, 0.2}, {B::ClickLinks, 0.8}},
                   {1, 4},
                   1.2,
                   ip_pool("203.0.113.", 1, 60),
                   all_user_agents()});
    return out;
}

std::span<const std::string_view> default_user_agents() { return kUserAgents; }

ActionTrace simulate(std::span<const VisitorProfile> profiles_in, std::span<const HoneySheet> sheets,
                     const LinkRegistry& registry, const SimulationSettings& settings) {
    std::vector<VisitorProfile> profiles(profiles_in.begin(), profiles_in.end());
    for (const auto& p : profiles)
        check_invariants(p);
    if (settings.duration_days < 0)
        infeasible("negative duration");
    for (const auto& s : sheets)
        sheetstore::check_invariants(s);

    ActionTrace trace;
    trace.seed = settings.seed;
    trace.start = settings.start;
    trace.duration_days = settings.duration_days;

    const bool wants_actions = !settings.targets ||
                               std::any_of(settings.targets->windows.begin(), settings.targets->windows.end(),
                                           [](const WindowTargets& w) { return w.opens > 0 || w.clicks > 0; });
    if (profiles.empty() && wants_actions && (settings.targets || settings.duration_days > 0))
        infeasible("no visitor profiles");
    if (sheets.empty() && wants_actions && (settings.targets || settings.duration_days > 0))
        infeasible("no sheets to visit");

    Rng root(settings.seed);
    Rng plan = root.fork();
    Rng edits = root.fork();
    Builder b{profiles, sheets, registry, plan, {}, {}};
    if (settings.targets)
        constrained(b, settings, *settings.targets);
    else
        unconstrained(b, settings);

    std::stable_sort(b.actions.begin(), b.actions.end(),
                     [](const TraceAction& x, const TraceAction& y) { return x.at < y.at; });
    concretize(b.actions, sheets, registry, edits);
    trace.actions = std::move(b.actions);
    return trace;
}

GroundTruth summarize(const ActionTrace& trace) {
    GroundTruth g;
    std::set<std::string> visitors, click_ips;
    for (const auto& a : trace.actions) {
        visitors.insert(a.visitor);
        ++g.actions_by_profile[a.profile];
        switch (a.kind) {
        case ActionKind::Open:
            ++g.opens;
            break;
        case ActionKind::Modify:
            ++g.modifications;
            ++g.modifications_by_behavior[std::string(to_string(a.behavior))];
            break;
        case ActionKind::Click:
            ++g.clicks;
            if (a.channel == Channel::Controlled)
                ++g.controlled_clicks;
            click_ips.insert(a.ip);
            break;
        }
    }
    g.distinct_visitors = visitors.size();
    g.distinct_click_ips = click_ips.size();
    return g;
}

// --- JSON ----------------------------------------------------------------------

json to_json(const VisitorProfile& p) {
    json mix = json::object();
    for (const auto& [b, v] : p.action_mix)
        mix[std::string(to_string(b))] = v;
    return {{"name", p.name},
            {"action_mix", mix},
            {"clicks_per_visit", {{"min", p.clicks_per_visit.min}, {"max", p.clicks_per_visit.max}}},
            {"visits_per_day", p.visits_per_day},
            {"source_ip_pool", p.source_ip_pool},
            {"user_agent_pool", p.user_agent_pool}};
}

VisitorProfile profile_from_json(const json& j) {
    VisitorProfile p = detail::parse_guard("profile", [&] {
        VisitorProfile p;
        p.name = j.at("name").get<std::string>();
        for (const auto& [k, v] : j.at("action_mix").items())
            p.action_mix[behavior_from_string(k)] = v.get<double>();
        if (j.contains("clicks_per_visit")) {
            const auto& c = j.at("clicks_per_visit");
            p.clicks_per_visit = {c.at("min").get<int>(), c.at("max").get<int>()};
        }
        p.visits_per_day = j.value("visits_per_day", 1.0);
        p.source_ip_pool = j.at("source_ip_pool").get<std::vector<std::string>>();
        p.user_agent_pool = j.value("user_agent_pool", std::vector<std::string>{});
        return p;
    });
    check_invariants(p);
    return p;
}

std::vector<VisitorProfile> load_profiles(const std::string& path) {
    const auto j = detail::read_json_file(path);
    const auto& list = j.is_object() && j.contains("profiles") ? j.at("profiles") : j;
    if (!list.is_array())
        throw Error(Errc::ParseError, path + ": expected a list of profiles");
    std::vector<VisitorProfile> out;
    for (const auto& p : list)
        out.push_back(profile_from_json(p));
    return out;
}

json to_json(const GroundTruth& g) {
    return {{"opens", g.opens},
            {"modifications", g.modifications},
            {"clicks", g.clicks},
            {"controlled_clicks", g.controlled_clicks},
            {"distinct_visitors", g.distinct_visitors},
            {"distinct_click_ips", g.distinct_click_ips},
            {"actions_by_profile", g.actions_by_profile},
            {"modifications_by_behavior", g.modifications_by_behavior}};
}

json to_json(const ActionTrace& trace) {
    json actions = json::array();
    for (const auto& a : trace.actions) {
        json o{{"at", format_iso(a.at)},
               {"visitor", a.visitor},
               {"profile", a.profile},
               {"sheet_id", a.sheet_id},
               {"kind", to_string(a.kind)},
               {"behavior", to_string(a.behavior)},
               {"ip", a.ip},
               {"port", a.port},
               {"user_agent", a.user_agent}};
        if (a.kind == ActionKind::Modify) {
            json e = json::array();
            for (const auto& c : a.edits)
                e.push_back(sheetstore::to_json(c));
            o["edits"] = std::move(e);
        }
        if (a.kind == ActionKind::Click) {
            o["token"] = a.token;
            o["channel"] = to_string(a.channel);
        }
        actions.push_back(std::move(o));
    }
    return {{"seed", trace.seed},
            {"start", format_iso(trace.start)},
            {"duration_days", trace.duration_days},
            {"actions", std::move(actions)},
            {"summary", to_json(summarize(trace))}};
}

ActionTrace trace_from_json(const json& j) {
    return detail::parse_guard("trace", [&] {
        ActionTrace t;
        t.seed = j.value("seed", std::uint64_t{0});
        t.start = parse_iso_or_throw(j.at("start").get<std::string>());
        t.duration_days = j.at("duration_days").get<int>();
        for (const auto& o : j.at("actions")) {
            TraceAction a;
            a.at = parse_iso_or_throw(o.at("at").get<std::string>());
            a.visitor = o.value("visitor", "");
            a.profile = o.value("profile", "");
            a.sheet_id = o.at("sheet_id").get<std::string>();
            const auto kind = o.at("kind").get<std::string>();
            if (kind == "open")
                a.kind = ActionKind::Open;
            else if (kind == "modify")
                a.kind = ActionKind::Modify;
            else if (kind == "click")
                a.kind = ActionKind::Click;
            else
                throw Error(Errc::ParseError, "unknown action kind: " + kind);
            a.behavior = behavior_from_string(o.value("behavior", "open_only"));
            a.ip = o.at("ip").get<std::string>();
            a.port = o.value("port", 0);
            a.user_agent = o.value("user_agent", "");
            if (a.kind == ActionKind::Modify)
                for (const auto& e : o.at("edits"))
                    a.edits.push_back(sheetstore::edit_command_from_json(e));
            if (a.kind == ActionKind::Click) {
                a.token = o.at("token").get<std::string>();
                const auto ch = o.value("channel", "controlled");
                if (ch != "controlled" && ch != "shortener")
                    throw Error(Errc::ParseError, "unknown channel: " + ch);
                a.channel = ch == "controlled" ? Channel::Controlled : Channel::Shortener;
            }
            t.actions.push_back(std::move(a));
        }
        return t;
    });
}

ActionTrace load_trace(const std::string& path) { return trace_from_json(detail::read_json_file(path)); }

void save_trace(const ActionTrace& trace, const std::string& path) {
    detail::write_file(path, detail::dump(to_json(trace), 2) + "\n");
}

TargetCounts targets_from_json(const json& j, Timestamp run_start, int run_days) {
    return detail::parse_guard("targets", [&] {
        auto counts = [](const json& o, WindowTargets& w) {
            w.opens = o.value("opens", std::uint64_t{0});
            w.modifications = o.value("modifications", std::uint64_t{0});
            w.clicks = o.value("clicks", std::uint64_t{0});
            w.controlled_clicks = o.value("controlled_clicks", std::uint64_t{0});
        };
        TargetCounts t;
        if (j.contains("windows")) {
            for (const auto& o : j.at("windows")) {
                WindowTargets w;
                w.name = o.value("name", "");
                w.start = parse_iso_or_throw(o.at("start").get<std::string>());
                w.days = o.at("days").get<int>();
                counts(o, w);
                t.windows.push_back(std::move(w));
            }
        } else {
            WindowTargets w;
            w.name = "all";
            w.start = run_start;
            w.days = run_days;
            counts(j, w);
            t.windows.push_back(std::move(w));
        }
        if (j.contains("unique_click_ips") && !j.at("unique_click_ips").is_null())
            t.unique_click_ips = j.at("unique_click_ips").get<std::uint64_t>();
        return t;
    });
}

} // namespace honeysheets::simharness
