#pragma once

#include "honeysheets/error.hpp"
#include "honeysheets/honeylink.hpp"
#include "honeysheets/rng.hpp"
#include "honeysheets/sheetstore.hpp"
#include "honeysheets/time.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace honeysheets::simharness {

/// What a visitor does after opening a sheet.
enum class Behavior { OpenOnly, ExpandColumns, DeleteContent, Deface, ClickLinks };

std::string_view to_string(Behavior b);
Behavior behavior_from_string(std::string_view s);
bool is_modifying(Behavior b);

struct ClickRange {
    int min = 1;
    int max = 3;
};

struct VisitorProfile {
    std::string name;
    std::map<Behavior, double> action_mix;
    ClickRange clicks_per_visit;
    /// Mean visits per simulated day (unconstrained runs) and relative weight
    /// when drawing visitors for count-constrained runs.
    double visits_per_day = 1.0;
    std::vector<std::string> source_ip_pool;
    std::vector<std::string> user_agent_pool;

    double mass(Behavior b) const;
    double modifying_mass() const;
};

/// Throws Error(InvalidProfile): mix must sum to 1 within 1e-9 with entries in
/// [0, 1], the IP pool must be non-empty and 0 <= min <= max.
void check_invariants(const VisitorProfile& profile);

/// curious, lurker, deleter, vandal, prober.
std::vector<VisitorProfile> default_profiles();
std::span<const std::string_view> default_user_agents();

enum class ActionKind { Open, Modify, Click };

/// Which monitoring channel would have seen a click in a deployment where only
/// controlled links reach the logging server.
enum class Channel { Controlled, Shortener };

std::string_view to_string(ActionKind k);
std::string_view to_string(Channel c);

struct TraceAction {
    Timestamp at;
    std::string visitor;
    std::string profile;
    std::string sheet_id;
    ActionKind kind = ActionKind::Open;
    Behavior behavior = Behavior::OpenOnly;
    std::vector<sheetstore::EditCommand> edits; // Modify
    std::string token;                          // Click
    Channel channel = Channel::Controlled;      // Click
    std::string ip;
    int port = 0;
    std::string user_agent;

    friend bool operator==(const TraceAction&, const TraceAction&) = default;
};

struct ActionTrace {
    std::uint64_t seed = 0;
    Timestamp start;
    int duration_days = 0;
    std::vector<TraceAction> actions;

    friend bool operator==(const ActionTrace&, const ActionTrace&) = default;
};

struct WindowTargets {
    std::string name;
    Timestamp start;
    int days = 0;
    std::uint64_t opens = 0;
    std::uint64_t modifications = 0;
    /// Clicks on any honey link.
    std::uint64_t clicks = 0;
    /// Subset of `clicks` on controlled links.
    std::uint64_t controlled_clicks = 0;
};

struct TargetCounts {
    std::vector<WindowTargets> windows;
    /// Exact number of distinct click source addresses; each of them also
    /// reaches a controlled link at least once.
    std::optional<std::uint64_t> unique_click_ips;
};

struct SimulationSettings {
    std::uint64_t seed = 42;
    Timestamp start;
    int duration_days = 0;
    std::optional<TargetCounts> targets;
};

/// Generates a time-ordered trace of opens, edits and clicks.
///
/// Without targets, each profile visits Poisson(visits_per_day) times a day and
/// behaves according to its action mix. With targets, every window receives
/// exactly the requested counts. Edit commands are concretized against shadow
/// copies of the sheets so that every Modify action changes its sheet when
/// replayed in order.
///
/// Throws Error(InfeasibleTargets) when the targets cannot be met, e.g.
/// modifications > opens, controlled_clicks > clicks, windows outside the run,
/// or no profile able to perform a required behavior.
ActionTrace simulate(std::span<const VisitorProfile> profiles, std::span<const sheetstore::HoneySheet> sheets,
                     const honeylink::LinkRegistry& registry, const SimulationSettings& settings);

/// Ground truth the sheet owner cannot observe (e.g. distinct visitors behind opens).
struct GroundTruth {
    std::uint64_t opens = 0;
    std::uint64_t modifications = 0;
    std::uint64_t clicks = 0;
    std::uint64_t controlled_clicks = 0;
    std::uint64_t distinct_visitors = 0;
    std::uint64_t distinct_click_ips = 0;
    std::map<std::string, std::uint64_t> actions_by_profile;
    std::map<std::string, std::uint64_t> modifications_by_behavior;
};

GroundTruth summarize(const ActionTrace& trace);

nlohmann::json to_json(const VisitorProfile& p);
nlohmann::json to_json(const ActionTrace& trace);
nlohmann::json to_json(const GroundTruth& truth);
VisitorProfile profile_from_json(const nlohmann::json& j);
std::vector<VisitorProfile> load_profiles(const std::string& path);
ActionTrace trace_from_json(const nlohmann::json& j);
ActionTrace load_trace(const std::string& path);
void save_trace(const ActionTrace& trace, const std::string& path);

/// Accepts `{"windows": [{name, start, days, opens, modifications, clicks,
/// controlled_clicks}], "unique_click_ips": N}` or flat top-level counts, which
/// then cover the whole run starting at `run_start`.
TargetCounts targets_from_json(const nlohmann::json& j, Timestamp run_start, int run_days);

// --- replay ----------------------------------------------------------------

struct ReplayHandles {
    std::map<std::string, sheetstore::HoneySheet>& sheets;
    std::filesystem::path mailbox_dir;
    honeylink::LinkServer& server;
    Duration snapshot_cadence = std::chrono::hours{2};
};

struct ReplayStats {
    std::size_t notifications = 0;
    std::size_t requests = 0;
    std::size_t redirects = 0;
};

class ReplayError : public Error {
public:
    ReplayError(std::size_t index, const std::string& what)
        : Error(Errc::ReplayRejected, "action " + std::to_string(index) + ": " + what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Drives the trace through the live components: opens and edits become
/// mailbox notifications (edits via snapshot, apply, diff, classify), clicks
/// become requests against the link server stamped with the virtual time.
/// Throws ReplayError carrying the index of the first rejected action.
ReplayStats replay(const ActionTrace& trace, ReplayHandles& handles);

} // namespace honeysheets::simharness
