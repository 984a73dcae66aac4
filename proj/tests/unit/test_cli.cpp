#include "honeysheets/cli.hpp"
#include "tmpdir.hpp"

#include <doctest.h>
#include <iostream>
#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

using honeysheets::cli::run;
namespace fs = std::filesystem;

namespace {

std::string scenario(const std::string& name) { return std::string(HS_SCENARIO_DIR) + "/" + name; }

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    return nlohmann::json::parse(in);
}

/// Captures std::cout while alive.
struct CaptureStdout {
    std::ostringstream buf;
    std::streambuf* old;
    CaptureStdout() : old(std::cout.rdbuf(buf.rdbuf())) {}
    ~CaptureStdout() { std::cout.rdbuf(old); }
};

struct QuietStderr {
    std::ostringstream buf;
    std::streambuf* old;
    QuietStderr() : old(std::cerr.rdbuf(buf.rdbuf())) {}
    ~QuietStderr() { std::cerr.rdbuf(old); }
};

} // namespace

TEST_SUITE("cli") {

TEST_CASE("help and usage errors") {
    {
        CaptureStdout out;
        CHECK(run({"report", "--help"}) == 0);
        CHECK(out.buf.str().find("--timeline") != std::string::npos);
    }
    QuietStderr err;
    CHECK(run({"explode"}) == 1);
    CHECK(run({}) == 1);
    CHECK(run({"gen"}) == 1);
    CHECK(run({"leak", "--theme", "hacker", "--days", "x", "--sheets", "s", "--out", "o"}) == 1);
    CHECK(err.buf.str().size() > 0);
}

TEST_CASE("data errors exit with 2") {
    testutil::TempDir d("cli-err");
    QuietStderr err;
    CHECK(run({"diff", "--before", d / "missing.json", "--after", d / "missing.json"}) == 2);
    std::ofstream(d / "bad.json") << "{not json";
    CHECK(run({"ingest", "--mailbox", d / "none", "--out", d / "t.json"}) == 0);
    CHECK(run({"--config", d / "bad.json", "ingest", "--out", d / "t.json"}) == 2);
    std::ofstream(d / "typo.json") << R"({"controled_domain": "x"})";
    CHECK(run({"--config", d / "typo.json", "ingest", "--out", d / "t.json"}) == 2);
    CHECK(run({"leak", "--theme", "pirate", "--days", "1", "--sheets", d / "bad.json", "--out", d / "p"}) == 2);
}

TEST_CASE("gen and diff") {
    testutil::TempDir d("cli-gen");
    CaptureStdout out;
    REQUIRE(run({"gen", "--rows", "10", "--seed", "1", "--out", d / "a.json", "--registry", d / "reg.json"}) == 0);
    REQUIRE(run({"gen", "--rows", "10", "--seed", "1", "--sheet-id", "copy", "--out", d / "b.json"}) == 0);
    const auto a = read_json(d / "a.json");
    CHECK(a["grid"].size() == 11);
    CHECK(read_json(d / "reg.json")["links"].size() == 9);

    auto edited = a;
    edited["grid"][3][2]["value"] = "";
    std::ofstream(d / "a2.json") << edited.dump();
    REQUIRE(run({"diff", "--before", d / "a.json", "--after", d / "a2.json", "--out", d / "cs.json"}) == 0);
    CHECK(out.buf.str().find("content") != std::string::npos);
    CHECK(read_json(d / "cs.json")["cell_changes"].size() == 1);

    QuietStderr err;
    CHECK(run({"diff", "--before", d / "a.json", "--after", d / "b.json"}) == 2);
    CHECK(run({"gen", "--seed", "1", "--out", d / "c.json", "--registry", d / "reg.json"}) == 2);
}

TEST_CASE("full pipeline") {
    testutil::TempDir d("cli-e2e");
    fs::copy_file(scenario("geo.csv"), d / "geo.csv");
    fs::copy_file(scenario("config.json"), d / "config.json");
    const auto cfg = d / "config.json";
    CaptureStdout out;
    for (int seed = 1; seed <= 5; ++seed)
        REQUIRE(run({"--config", cfg, "gen", "--seed", std::to_string(seed), "--out",
                     d / ("sheets/s" + std::to_string(seed) + ".json"), "--registry", d / "registry.json",
                     "--append-to", d / "sheets.json"}) == 0);
    REQUIRE(run({"--config", cfg, "leak", "--theme", "hacker", "--days", "46", "--start", "2016-01-23", "--sheets",
                 d / "sheets.json", "--out", d / "posts"}) == 0);
    CHECK(read_json(d / "posts/schedule.json").size() == 92);
    REQUIRE(run({"--config", cfg, "simulate", "--profiles", scenario("profiles.json"), "--targets",
                 scenario("targets.json"), "--sheets", d / "sheets.json", "--registry", d / "registry.json", "--out",
                 d / "trace.json"}) == 0);
    REQUIRE(run({"--config", cfg, "replay", "--trace", d / "trace.json", "--sheets", d / "sheets.json", "--registry",
                 d / "registry.json"}) == 0);
    REQUIRE(run({"--config", cfg, "ingest", "--out", d / "timeline.json"}) == 0);
    REQUIRE(run({"--config", cfg, "report", "--timeline", d / "timeline.json", "--bounds", scenario("bounds.json"),
                 "--registry", d / "registry.json", "--trace", d / "trace.json", "--out", d / "report"}) == 0);

    CHECK(fs::exists(d / "report/report.json"));
    CHECK(fs::exists(d / "report/countries.csv"));
    CHECK(fs::exists(d / "report/ground_truth.json"));
    const auto total = read_json(d / "report/report.json")["total"];
    CHECK(total["open_count"] == 165);
    CHECK(total["modification_count"] == 28);
    CHECK(total["click_count"] == 174);
    CHECK(total["controlled_link_visit_count"] == 44);
    CHECK(total["unique_ip_count"] == 39);
    CHECK(total["distinct_country_count"] == 35);
}

} // TEST_SUITE
