#include "honeysheets/cli.hpp"

#include "detail.hpp"
#include "honeysheets/analytics.hpp"
#include "honeysheets/config.hpp"
#include "honeysheets/honeygen.hpp"
#include "honeysheets/honeylink.hpp"
#include "honeysheets/http_server.hpp"
#include "honeysheets/leak.hpp"
#include "honeysheets/notify.hpp"
#include "honeysheets/simharness.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <iostream>
#include <pthread.h>
#include <thread>

namespace honeysheets::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string resolve_near(const fs::path& list_file, const std::string& p) {
    if (fs::path(p).is_absolute())
        return p;
    return (list_file.parent_path() / p).string();
}

/// A sheets list is a JSON array whose items are sheet documents, paths to
/// sheet files (relative to the list), or {sheet_id, share_link} references.
json load_sheet_list(const std::string& path) {
    json j = detail::read_json_file(path);
    if (j.is_object())
        j = json::array({j});
    if (!j.is_array())
        throw Error(Errc::ParseError, path + ": expected a list of sheets");
    return j;
}

std::vector<sheetstore::HoneySheet> load_sheets(const std::string& path) {
    std::vector<sheetstore::HoneySheet> out;
    for (const auto& item : load_sheet_list(path)) {
        if (item.is_string())
            out.push_back(sheetstore::load_sheet(resolve_near(path, item.get<std::string>())));
        else if (item.is_object() && item.contains("grid"))
            out.push_back(sheetstore::sheet_from_json(item));
        else
            throw Error(Errc::ParseError, path + ": sheet entries must be documents or paths");
    }
    return out;
}

std::vector<leak::SheetRef> load_sheet_refs(const std::string& path) {
    std::vector<leak::SheetRef> out;
    for (const auto& item : load_sheet_list(path)) {
        if (item.is_string()) {
            const auto s = sheetstore::load_sheet(resolve_near(path, item.get<std::string>()));
            out.push_back({s.sheet_id, s.share_link});
        } else {
            detail::parse_guard("sheet reference", [&] {
                out.push_back({item.at("sheet_id").get<std::string>(), item.at("share_link").get<std::string>()});
                return 0;
            });
        }
    }
    return out;
}

std::pair<std::string, int> split_bind(const std::string& bind) {
    const auto colon = bind.rfind(':');
    if (colon == std::string::npos || colon == 0)
        throw UsageError("--bind expects host:port, got " + bind);
    std::string host = bind.substr(0, colon);
    if (host.size() > 2 && host.front() == '[' && host.back() == ']')
        host = host.substr(1, host.size() - 2);
    int port = 0;
    try {
        std::size_t used = 0;
        port = std::stoi(bind.substr(colon + 1), &used);
        if (used != bind.size() - colon - 1)
            throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw UsageError("--bind has an invalid port: " + bind);
    }
    if (port < 0 || port > 65535)
        throw UsageError("--bind port out of range: " + bind);
    return {host, port};
}

/// Creates the parent directory of an output file.
const std::string& prepare_out(const std::string& path) {
    const auto parent = fs::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty())
        fs::create_directories(parent, ec);
    if (ec)
        throw Error(Errc::IoError, "cannot create " + parent.string() + ": " + ec.message());
    return path;
}

Timestamp parse_date_flag(const std::string& flag, const std::string& text) {
    if (auto t = parse_iso(text))
        return *t;
    throw UsageError(flag + " expects an ISO-8601 date or time, got " + text);
}

// --- subcommands ---------------------------------------------------------------

struct GenArgs {
    std::size_t rows = 20;
    std::size_t links = 9;
    std::size_t controlled = 3;
    std::optional<std::uint64_t> seed;
    std::string country = "GB";
    std::string sheet_id;
    std::string registry;
    std::string out;
    std::string append_to;
};

int cmd_gen(const Config& cfg, const GenArgs& a) {
    honeygen::SheetConfig sc;
    sc.rows = a.rows;
    sc.link_slots = a.links;
    sc.controlled_slots = a.controlled;
    sc.rng_seed = a.seed.value_or(cfg.gen_seed);
    sc.country = a.country;
    sc.sheet_id = a.sheet_id.empty() ? honeygen::default_sheet_id(sc.rng_seed) : a.sheet_id;
    honeygen::check_invariants(sc);

    honeylink::LinkRegistry registry(cfg.controlled_domain, cfg.redirect_target);
    if (!a.registry.empty() && fs::exists(a.registry))
        registry = honeylink::load_registry(a.registry);
    if (!registry.links_for(sc.sheet_id).empty())
        throw Error(Errc::ConfigMismatch, "registry already holds links for sheet " + sc.sheet_id);

    Rng rng(sc.rng_seed);
    const auto links = honeygen::mint_sheet_links(sc, registry, rng);
    const auto sheet = honeygen::build_honey_sheet(sc, links, registry);
    sheetstore::save_sheet(sheet, prepare_out(a.out));
    if (!a.registry.empty())
        honeylink::save_registry(registry, prepare_out(a.registry));

    if (!a.append_to.empty()) {
        json list = fs::exists(a.append_to) ? load_sheet_list(a.append_to) : json::array();
        const auto rel = fs::absolute(a.out).lexically_relative(fs::absolute(a.append_to).parent_path());
        list.push_back(rel.empty() ? fs::absolute(a.out).string() : rel.string());
        detail::write_file(prepare_out(a.append_to), detail::dump(list, 2) + "\n");
    }
    std::cout << sheet.sheet_id << "\n";
    return 0;
}

struct DiffArgs {
    std::string before, after, out;
};

int cmd_diff(const DiffArgs& a) {
    const Timestamp epoch{};
    const auto before = sheetstore::load_snapshot(a.before, epoch);
    const auto after = sheetstore::load_snapshot(a.after, epoch);
    const auto changes = sheetstore::diff(before, after);
    if (a.out.empty()) {
        std::cout << detail::dump(sheetstore::to_json(changes), 2) << "\n";
        return 0;
    }
    detail::write_file(prepare_out(a.out), detail::dump(sheetstore::to_json(changes), 2) + "\n");
    std::cout << (changes.empty() ? std::string("unchanged") : std::string(to_string(sheetstore::classify(changes))))
              << "\n";
    return 0;
}

struct ServeArgs {
    std::string registry, log, redirect, bind;
    int threads = 16;
    bool trust_forwarded = false;
};

int cmd_serve(const Config& cfg, const ServeArgs& a) {
    auto registry = honeylink::load_registry(a.registry);
    if (!a.redirect.empty())
        registry.set_redirect_target(a.redirect);
    if (registry.redirect_target().empty())
        registry.set_redirect_target(cfg.redirect_target);
    const auto [host, port] = split_bind(a.bind.empty() ? cfg.bind : a.bind);
    const std::string log_path = prepare_out(a.log.empty() ? cfg.log_path : a.log);

    honeylink::AccessLog log(std::make_shared<honeylink::FileLogSink>(log_path));
    honeylink::LinkServer core(registry, log, {a.trust_forwarded});
    honeylink::HttpServer server(core, {a.threads});

    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    sigaddset(&set, SIGUSR1);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);

    const int bound = server.bind(host, port);
    if (bound < 0)
        throw Error(Errc::IoError, "cannot bind " + host + ":" + std::to_string(port));
    std::cerr << "serving " << registry.size() << " links on " << host << ":" << bound << ", logging to "
              << log_path << "\n";

    std::thread waiter([&] {
        int sig = 0;
        sigwait(&set, &sig);
        server.stop();
    });
    const bool ok = server.listen();
    pthread_kill(waiter.native_handle(), SIGUSR1);
    waiter.join();
    std::cerr << "stopped after " << log.written() << " requests, " << log.failures() << " log failures\n";
    return ok ? 0 : 2;
}

struct IngestArgs {
    std::string mailbox, out;
};

int cmd_ingest(const Config& cfg, const IngestArgs& a) {
    const auto result = notify::ingest_mailbox(a.mailbox.empty() ? cfg.mailbox_dir : a.mailbox);
    notify::save_timeline(result.timeline, prepare_out(a.out), result.quarantined);
    if (result.quarantined > 0)
        std::cerr << "quarantined " << result.quarantined << " malformed message(s)\n";
    std::cout << result.timeline.events.size() << " events\n";
    return 0;
}

struct LeakArgs {
    std::string theme, sheets, out, start;
    int days = 0;
    int per_day = 2;
    std::optional<std::uint64_t> seed;
};

int cmd_leak(const Config& cfg, const LeakArgs& a) {
    leak::Experiment ex{leak::Theme::by_name(a.theme),
                        a.start.empty() ? start_of_day(now_utc()) : start_of_day(parse_date_flag("--start", a.start)),
                        a.days, a.per_day};
    Rng rng(a.seed.value_or(cfg.gen_seed));
    const auto posts = leak::schedule(ex, load_sheet_refs(a.sheets), rng);
    leak::FileLeakSink sink(a.out);
    json listing = json::array();
    for (const auto& p : posts) {
        const auto receipt = sink.post(p);
        listing.push_back({{"receipt", receipt},
                           {"scheduled_at", format_iso(p.scheduled_at)},
                           {"sheet_id", p.sheet_id},
                           {"text", p.rendered_text},
                           {"theme", p.theme}});
    }
    detail::write_file(fs::path(a.out) / "schedule.json", detail::dump(listing, 2) + "\n");
    std::cout << posts.size() << " posts\n";
    return 0;
}

struct SimulateArgs {
    std::string profiles, targets, sheets, registry, out, start;
    std::optional<int> days;
    std::optional<std::uint64_t> seed;
};

int cmd_simulate(const Config& cfg, const SimulateArgs& a) {
    const auto profiles =
        a.profiles.empty() ? simharness::default_profiles() : simharness::load_profiles(a.profiles);
    const auto sheets = load_sheets(a.sheets);
    const auto registry = honeylink::load_registry(a.registry);

    simharness::SimulationSettings s;
    s.seed = a.seed.value_or(cfg.sim_seed);
    std::optional<json> targets;
    if (!a.targets.empty())
        targets = detail::read_json_file(a.targets);

    std::optional<Timestamp> start;
    if (!a.start.empty())
        start = parse_date_flag("--start", a.start);
    std::optional<int> days = a.days;
    if (targets && targets->contains("windows") && (!start || !days)) {
        // Default the run to the span covered by the windows.
        const auto probe = simharness::targets_from_json(*targets, Timestamp{}, 0);
        Timestamp lo = probe.windows.empty() ? Timestamp{} : probe.windows.front().start;
        Timestamp hi = lo;
        for (const auto& w : probe.windows) {
            lo = std::min(lo, w.start);
            hi = std::max(hi, w.start + std::chrono::hours{24} * w.days);
        }
        if (!start)
            start = lo;
        if (!days)
            days = static_cast<int>(std::chrono::ceil<std::chrono::days>(hi - *start).count());
    }
    if (!start)
        throw UsageError("--start is required without windowed targets");
    if (!days)
        throw UsageError("--days is required without windowed targets");
    if (*days < 0)
        throw UsageError("--days must be non-negative");
    s.start = *start;
    s.duration_days = *days;
    if (targets)
        s.targets = simharness::targets_from_json(*targets, s.start, s.duration_days);

    const auto trace = simharness::simulate(profiles, sheets, registry, s);
    simharness::save_trace(trace, prepare_out(a.out));
    std::cout << trace.actions.size() << " actions\n";
    return 0;
}

struct ReplayArgs {
    std::string trace, sheets, registry, mailbox, log, sheets_out;
    std::optional<int> cadence_minutes;
};

int cmd_replay(const Config& cfg, const ReplayArgs& a) {
    const auto trace = simharness::load_trace(a.trace);
    std::map<std::string, sheetstore::HoneySheet> sheets;
    for (auto& s : load_sheets(a.sheets)) {
        auto id = s.sheet_id;
        sheets.emplace(std::move(id), std::move(s));
    }
    const auto registry = honeylink::load_registry(a.registry);
    const int cadence = a.cadence_minutes.value_or(cfg.snapshot_cadence_minutes);
    if (cadence <= 0)
        throw UsageError("--cadence-minutes must be positive");

    honeylink::AccessLog log(std::make_shared<honeylink::FileLogSink>(prepare_out(a.log.empty() ? cfg.log_path : a.log)));
    honeylink::LinkServer server(registry, log);
    simharness::ReplayHandles handles{sheets, a.mailbox.empty() ? cfg.mailbox_dir : a.mailbox, server,
                                      std::chrono::minutes{cadence}};
    const auto stats = simharness::replay(trace, handles);
    if (log.failures() > 0)
        throw Error(Errc::IoError, std::to_string(log.failures()) + " access log writes failed");

    if (!a.sheets_out.empty()) {
        fs::create_directories(a.sheets_out);
        for (const auto& [id, sheet] : sheets)
            sheetstore::save_sheet(sheet, (fs::path(a.sheets_out) / (id + ".json")).string());
    }
    std::cout << stats.notifications << " notifications, " << stats.requests << " requests\n";
    return 0;
}

struct ReportArgs {
    std::string timeline, log, geo, bounds, registry, trace, out;
};

int cmd_report(const Config& cfg, const ReportArgs& a) {
    const auto timeline = notify::load_timeline(a.timeline);
    const auto logs = honeylink::read_access_log(a.log.empty() ? cfg.log_path : a.log);
    if (logs.bad_lines > 0)
        std::cerr << "skipped " << logs.bad_lines << " unparseable log line(s)\n";
    const std::string geo_path = a.geo.empty() ? cfg.geo_table_path : a.geo;
    const auto geo = geo_path.empty() ? analytics::GeoTable{} : analytics::GeoTable::load_csv(geo_path);
    const auto bounds = analytics::load_boundaries(a.bounds);
    const auto registry = honeylink::load_registry(a.registry);

    const auto report = analytics::aggregate(timeline, logs.entries, geo, bounds, registry);
    analytics::export_report(report, a.out);
    if (!a.trace.empty()) {
        const auto truth = simharness::summarize(simharness::load_trace(a.trace));
        detail::write_file(fs::path(a.out) / "ground_truth.json", detail::dump(simharness::to_json(truth), 2) + "\n");
    }
    const auto& t = report.total;
    std::cout << "opens " << t.open_count << ", modifications " << t.modification_count << ", clicks "
              << t.click_count << ", controlled visits " << t.controlled_link_visit_count << ", unique IPs "
              << t.unique_ip_count << ", countries " << t.distinct_country_count() << "\n";
    return 0;
}

} // namespace

int run(int argc, char** argv) {
    CLI::App app{"Decoy payroll spreadsheets with tracked links and activity reports", "honeysheets"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "Shared configuration file (JSON)");

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Generate a decoy sheet and mint its links");
    g->add_option("--rows", gen.rows, "Personnel rows")->capture_default_str();
    g->add_option("--links", gen.links, "Link slots")->capture_default_str();
    g->add_option("--controlled", gen.controlled, "Controlled link slots")->capture_default_str();
    g->add_option("--seed", gen.seed, "Generation seed");
    g->add_option("--country", gen.country, "IBAN country (GB, DE, FR)")->capture_default_str();
    g->add_option("--sheet-id", gen.sheet_id, "Sheet identifier (derived from the seed by default)");
    g->add_option("--registry", gen.registry, "Link registry to extend (created when missing)");
    g->add_option("--out", gen.out, "Output sheet file")->required();
    g->add_option("--append-to", gen.append_to, "Sheets list to append the output path to");

    DiffArgs dif;
    auto* d = app.add_subcommand("diff", "Difference between two captures of a sheet");
    d->add_option("--before", dif.before, "Earlier sheet or snapshot")->required();
    d->add_option("--after", dif.after, "Later sheet or snapshot")->required();
    d->add_option("--out", dif.out, "ChangeSet output (stdout when omitted)");

    ServeArgs srv;
    auto* s = app.add_subcommand("serve", "Run the logging redirect server");
    s->add_option("--registry", srv.registry, "Link registry")->required();
    s->add_option("--log", srv.log, "Access log path");
    s->add_option("--redirect", srv.redirect, "Location for known tokens");
    s->add_option("--bind", srv.bind, "host:port");
    s->add_option("--threads", srv.threads, "Worker threads")->capture_default_str()->check(CLI::Range(1, 1024));
    s->add_flag("--trust-forwarded", srv.trust_forwarded, "Take client address from X-Forwarded-For");

    IngestArgs ing;
    auto* i = app.add_subcommand("ingest", "Parse notification mailbox into a timeline");
    i->add_option("--mailbox", ing.mailbox, "Mailbox directory");
    i->add_option("--out", ing.out, "Timeline output")->required();

    LeakArgs lk;
    auto* l = app.add_subcommand("leak", "Schedule themed leak posts");
    l->add_option("--theme", lk.theme, "hacker or naive")->required();
    l->add_option("--days", lk.days, "Number of days")->required()->check(CLI::NonNegativeNumber);
    l->add_option("--per-day", lk.per_day, "Posts per day")->capture_default_str()->check(CLI::NonNegativeNumber);
    l->add_option("--start", lk.start, "First day (YYYY-MM-DD, default today)");
    l->add_option("--sheets", lk.sheets, "Sheets list")->required();
    l->add_option("--seed", lk.seed, "Template selection seed");
    l->add_option("--out", lk.out, "Output directory")->required();

    SimulateArgs sim;
    auto* m = app.add_subcommand("simulate", "Generate a visitor action trace");
    m->add_option("--profiles", sim.profiles, "Visitor profiles (bundled set by default)");
    m->add_option("--seed", sim.seed, "Simulation seed");
    m->add_option("--days", sim.days, "Simulated days");
    m->add_option("--start", sim.start, "First simulated day");
    m->add_option("--targets", sim.targets, "Exact counts to reproduce");
    m->add_option("--sheets", sim.sheets, "Sheets list")->required();
    m->add_option("--registry", sim.registry, "Link registry")->required();
    m->add_option("--out", sim.out, "Trace output")->required();

    ReplayArgs rep;
    auto* r = app.add_subcommand("replay", "Drive a trace through mailbox and link server");
    r->add_option("--trace", rep.trace, "Action trace")->required();
    r->add_option("--sheets", rep.sheets, "Sheets list")->required();
    r->add_option("--registry", rep.registry, "Link registry")->required();
    r->add_option("--mailbox", rep.mailbox, "Mailbox directory");
    r->add_option("--log", rep.log, "Access log path");
    r->add_option("--cadence-minutes", rep.cadence_minutes, "Snapshot cadence");
    r->add_option("--sheets-out", rep.sheets_out, "Directory for the edited sheets");

    ReportArgs rpt;
    auto* p = app.add_subcommand("report", "Aggregate timeline and access log");
    p->add_option("--timeline", rpt.timeline, "Timeline from ingest")->required();
    p->add_option("--log", rpt.log, "Access log path");
    p->add_option("--geo", rpt.geo, "Geo table (cidr,country)");
    p->add_option("--bounds", rpt.bounds, "Experiment windows")->required();
    p->add_option("--registry", rpt.registry, "Link registry")->required();
    p->add_option("--trace", rpt.trace, "Trace whose ground truth to export");
    p->add_option("--out", rpt.out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, std::cout, std::cerr);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, std::cout, std::cerr);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cerr, std::cerr);
        return 1;
    }

    try {
        const Config cfg = config_path.empty() ? Config{} : load_config(config_path);
        if (g->parsed())
            return cmd_gen(cfg, gen);
        if (d->parsed())
            return cmd_diff(dif);
        if (s->parsed())
            return cmd_serve(cfg, srv);
        if (i->parsed())
            return cmd_ingest(cfg, ing);
        if (l->parsed())
            return cmd_leak(cfg, lk);
        if (m->parsed())
            return cmd_simulate(cfg, sim);
        if (r->parsed())
            return cmd_replay(cfg, rep);
        if (p->parsed())
            return cmd_report(cfg, rpt);
        std::cerr << app.help();
        return 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int run(const std::vector<std::string>& args) {
    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("honeysheets");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : storage)
        argv.push_back(a.data());
    argv.push_back(nullptr);
    return run(static_cast<int>(storage.size()), argv.data());
}

} // namespace honeysheets::cli
