#include "honeysheets/config.hpp"

#include "detail.hpp"

#include <filesystem>
#include <set>

namespace honeysheets {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string resolve(const std::string& base_dir, const std::string& p) {
    if (p.empty() || base_dir.empty() || fs::path(p).is_absolute())
        return p;
    return (fs::path(base_dir) / p).lexically_normal().string();
}

} // namespace

Config config_from_json(const json& j, const std::string& base_dir) {
    static const std::set<std::string> known{"controlled_domain",
                                             "redirect_target",
                                             "mailbox_dir",
                                             "log_path",
                                             "geo_table_path",
                                             "gen_seed",
                                             "sim_seed",
                                             "snapshot_cadence_minutes",
                                             "bind"};
    if (!j.is_object())
        throw Error(Errc::ParseError, "config: expected an object");
    for (const auto& [k, v] : j.items())
        if (!known.count(k))
            throw Error(Errc::ParseError, "config: unknown key " + k);

    Config c = detail::parse_guard("config", [&] {
        Config c;
        c.controlled_domain = j.value("controlled_domain", c.controlled_domain);
        c.redirect_target = j.value("redirect_target", c.redirect_target);
        c.mailbox_dir = j.value("mailbox_dir", c.mailbox_dir);
        c.log_path = j.value("log_path", c.log_path);
        c.geo_table_path = j.value("geo_table_path", c.geo_table_path);
        c.gen_seed = j.value("gen_seed", c.gen_seed);
        c.sim_seed = j.value("sim_seed", c.sim_seed);
        c.snapshot_cadence_minutes = j.value("snapshot_cadence_minutes", c.snapshot_cadence_minutes);
        c.bind = j.value("bind", c.bind);
        return c;
    });
    if (c.snapshot_cadence_minutes <= 0)
        throw Error(Errc::ParseError, "config: snapshot_cadence_minutes must be positive");
    if (c.controlled_domain.empty())
        throw Error(Errc::ParseError, "config: controlled_domain is empty");

    c.mailbox_dir = resolve(base_dir, c.mailbox_dir);
    c.log_path = resolve(base_dir, c.log_path);
    c.geo_table_path = resolve(base_dir, c.geo_table_path);
    if (!c.geo_table_path.empty() && !fs::is_regular_file(c.geo_table_path))
        throw Error(Errc::IoError, "config: geo table not found: " + c.geo_table_path);
    const auto log_parent = fs::path(c.log_path).parent_path();
    if (!log_parent.empty() && !fs::is_directory(log_parent))
        throw Error(Errc::IoError, "config: log directory not found: " + log_parent.string());
    return c;
}

Config load_config(const std::string& path) {
    return config_from_json(detail::read_json_file(path), fs::path(path).parent_path().string());
}

json to_json(const Config& c) {
    return {{"controlled_domain", c.controlled_domain},
            {"redirect_target", c.redirect_target},
            {"mailbox_dir", c.mailbox_dir},
            {"log_path", c.log_path},
            {"geo_table_path", c.geo_table_path},
            {"gen_seed", c.gen_seed},
            {"sim_seed", c.sim_seed},
            {"snapshot_cadence_minutes", c.snapshot_cadence_minutes},
            {"bind", c.bind}};
}

} // namespace honeysheets
