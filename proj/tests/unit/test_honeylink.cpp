#include "honeysheets/error.hpp"
#include "honeysheets/honeylink.hpp"
#include "honeysheets/http_server.hpp"

#include <doctest.h>
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

using namespace honeysheets;
using namespace honeysheets::honeylink;

namespace {

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return Errc::IoError;
}

LinkRegistry nine_links(std::uint64_t seed = 1) {
    LinkRegistry reg("hs.example.org", "https://www.google.com/");
    Rng rng(seed);
    for (int i = 0; i < 3; ++i)
        mint_token(reg, TargetClass::Controlled, "https://hs.example.org/transfer/" + std::to_string(i), "sheet-a",
                   rng);
    for (int i = 0; i < 6; ++i)
        mint_token(reg, TargetClass::DecoyBank, "https://www.bank.example/online-banking/x" + std::to_string(i),
                   "sheet-a", rng);
    return reg;
}

std::string first_token(const LinkRegistry& reg, TargetClass cls) {
    for (const auto& [t, l] : reg.links())
        if (l.target_class == cls)
            return t;
    return {};
}

} // namespace

TEST_SUITE("honeylink") {

TEST_CASE("minting") {
    const auto reg = nine_links();
    CHECK(reg.size() == 9);
    CHECK(reg.links_for("sheet-a").size() == 9);
    for (const auto& [token, link] : reg.links()) {
        CHECK(token.size() == kTokenLength);
        CHECK(token_from_path("/t/" + token) == token);
        CHECK(reg.resolve(token) != nullptr);
    }
    CHECK(reg.short_url("AbC123") == "https://hs.example.org/t/AbC123");
}

TEST_CASE("independent rng states give distinct tokens") {
    LinkRegistry reg("hs.example.org", "https://www.google.com/");
    Rng a(1), b(1);
    const auto x = mint_token(reg, TargetClass::Controlled, "https://hs.example.org/a", "s", a);
    const auto y = mint_token(reg, TargetClass::Controlled, "https://hs.example.org/b", "s", b);
    CHECK(x.token != y.token);
}

TEST_CASE("destinations are validated") {
    LinkRegistry reg("hs.example.org", "https://www.google.com/");
    Rng rng(1);
    CHECK(code_of([&] { mint_token(reg, TargetClass::Controlled, "not a url", "s", rng); }) ==
          Errc::BadDestination);
    CHECK(code_of([&] { mint_token(reg, TargetClass::Controlled, "ftp://hs.example.org/x", "s", rng); }) ==
          Errc::BadDestination);
    CHECK(code_of([&] { mint_token(reg, TargetClass::Controlled, "https://elsewhere.example/x", "s", rng); }) ==
          Errc::BadDestination);
    CHECK(code_of([&] { mint_token(reg, TargetClass::DecoyBank, "https://hs.example.org/x", "s", rng); }) ==
          Errc::BadDestination);
    CHECK(reg.size() == 0);
}

TEST_CASE("keyspace exhaustion") {
    LinkRegistry reg("hs.example.org", "https://www.google.com/", 1);
    CHECK(reg.keyspace() == 62);
    Rng rng(3);
    std::set<std::string> tokens;
    for (int i = 0; i < 62; ++i)
        tokens.insert(mint_token(reg, TargetClass::Controlled, "https://hs.example.org/x", "s", rng).token);
    CHECK(tokens.size() == 62);
    CHECK(code_of([&] { mint_token(reg, TargetClass::Controlled, "https://hs.example.org/x", "s", rng); }) ==
          Errc::KeyspaceExhausted);
    CHECK(LinkRegistry("d", "r").keyspace() == 56800235584ULL);
}

TEST_CASE("duplicate insert rejected") {
    auto reg = nine_links();
    const auto link = reg.links().begin()->second;
    CHECK(code_of([&] { reg.insert(link); }) == Errc::ConfigMismatch);
}

TEST_CASE("registry round trip") {
    const auto reg = nine_links(4);
    const auto back = registry_from_json(to_json(reg));
    CHECK(back.links() == reg.links());
    CHECK(back.redirect_target() == reg.redirect_target());
    CHECK(back.controlled_domain() == reg.controlled_domain());
}

TEST_CASE("token_from_path") {
    CHECK(token_from_path("/t/AbC123") == "AbC123");
    CHECK(token_from_path("/t/AbC123?utm=1") == "AbC123");
    CHECK_FALSE(token_from_path("/t/AbC12").has_value());
    CHECK_FALSE(token_from_path("/t/AbC1234").has_value());
    CHECK_FALSE(token_from_path("/x/AbC123").has_value());
    CHECK_FALSE(token_from_path("/t/AbC-23").has_value());
}

TEST_CASE("user agent corpus") {
    std::ifstream in(std::string(HS_TEST_DATA) + "/ua_corpus.tsv");
    REQUIRE(in);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        const auto t1 = line.find('\t');
        const auto t2 = line.find('\t', t1 + 1);
        REQUIRE(t2 != std::string::npos);
        const auto got = parse_user_agent(line.substr(t2 + 1));
        INFO(line);
        CHECK(to_string(got.browser) == line.substr(0, t1));
        CHECK(to_string(got.os) == line.substr(t1 + 1, t2 - t1 - 1));
        ++rows;
    }
    CHECK(rows == 50);
}

TEST_CASE("log lines round trip") {
    AccessLogEntry e;
    e.ip = "203.0.113.5";
    e.port = 51000;
    e.method = "GET";
    e.path = "/t/AbC123";
    e.headers = {{"Host", "hs.example.org"}, {"User-Agent", "x\"y\nz"}, {"X-Weird", "\xff\xfe"}};
    e.received_at = parse_iso_or_throw("2016-01-23T09:00:00.123456Z");
    e.token = "AbC123";
    const auto line = serialize(e);
    CHECK(line.find('\n') == std::string::npos);
    auto back = parse_log_line(line);
    CHECK(back.ip == e.ip);
    CHECK(back.port == e.port);
    CHECK(back.received_at == e.received_at);
    CHECK(back.token == e.token);
    CHECK(back.header("user-agent") == "x\"y\nz");

    e.headers.pop_back();
    CHECK(parse_log_line(serialize(e)) == e);
    e.token.reset();
    CHECK(parse_log_line(serialize(e)) == e);
    CHECK(code_of([] { parse_log_line("{\"ip\": 1}"); }) == Errc::ParseError);
    CHECK(code_of([] { parse_log_line("not json"); }) == Errc::ParseError);
}

TEST_CASE("link server core") {
    const auto reg = nine_links();
    auto sink = std::make_shared<MemoryLogSink>();
    AccessLog log(sink);
    LinkServer server(reg, log);
    const auto token = first_token(reg, TargetClass::Controlled);

    HttpRequest ok{"GET", "/t/" + token, {{"User-Agent", "ua"}, {"Accept", "*/*"}}, "203.0.113.5", 51000};
    const auto r1 = server.handle(ok, parse_iso_or_throw("2016-01-23T09:00:00Z"));
    CHECK(r1.status == 302);
    REQUIRE_FALSE(r1.headers.empty());
    CHECK(r1.headers[0] == Header{"Location", "https://www.google.com/"});

    HttpRequest bad{"GET", "/t/zzzzzz", {}, "203.0.113.6", 40000};
    CHECK(server.handle(bad, parse_iso_or_throw("2016-01-23T09:00:01Z")).status == 404);
    HttpRequest post{"POST", "/t/" + token, {}, "203.0.113.7", 40001};
    CHECK(server.handle(post, parse_iso_or_throw("2016-01-23T09:00:02Z")).status == 404);
    HttpRequest root{"GET", "/", {}, "203.0.113.8", 40002};
    CHECK(server.handle(root, parse_iso_or_throw("2016-01-23T09:00:03Z")).status == 404);

    const auto lines = sink->lines();
    REQUIRE(lines.size() == 4);
    const auto e0 = parse_log_line(lines[0]);
    CHECK(e0.ip == "203.0.113.5");
    CHECK(e0.port == 51000);
    CHECK(e0.path == "/t/" + token);
    CHECK(e0.headers.size() == 2);
    CHECK(e0.token == token);
    CHECK_FALSE(parse_log_line(lines[1]).token.has_value());
    CHECK_FALSE(parse_log_line(lines[2]).token.has_value());
}

TEST_CASE("forwarded headers honoured only when trusted") {
    const auto reg = nine_links();
    auto sink = std::make_shared<MemoryLogSink>();
    AccessLog log(sink);
    HttpRequest req{"GET", "/t/zzzzzz", {{"X-Forwarded-For", "198.51.100.4, 10.0.0.1"}, {"X-Forwarded-Port", "4444"}},
                    "127.0.0.1", 5000};
    LinkServer plain(reg, log);
    plain.handle(req, Timestamp{});
    LinkServer proxied(reg, log, {true});
    proxied.handle(req, Timestamp{});
    const auto lines = sink->lines();
    CHECK(parse_log_line(lines[0]).ip == "127.0.0.1");
    CHECK(parse_log_line(lines[1]).ip == "198.51.100.4");
    CHECK(parse_log_line(lines[1]).port == 4444);
}

TEST_CASE("log timestamps never go backwards") {
    auto sink = std::make_shared<MemoryLogSink>();
    AccessLog log(sink);
    AccessLogEntry e;
    e.received_at = parse_iso_or_throw("2016-01-23T09:00:05Z");
    log.append(e);
    e.received_at = parse_iso_or_throw("2016-01-23T09:00:01Z");
    CHECK(log.append(e).received_at == parse_iso_or_throw("2016-01-23T09:00:05Z"));
}

namespace {

struct FailingSink : LogSink {
    bool write_line(std::string_view) override { return false; }
};

} // namespace

TEST_CASE("sink failures are counted and requests still answered") {
    const auto reg = nine_links();
    AccessLog log(std::make_shared<FailingSink>());
    LinkServer server(reg, log);
    HttpRequest req{"GET", "/t/" + first_token(reg, TargetClass::DecoyBank), {}, "203.0.113.5", 1};
    CHECK(server.handle(req, Timestamp{}).status == 302);
    CHECK(log.failures() == 1);
    CHECK(log.written() == 0);
}

TEST_CASE("http server under concurrent load") {
    const auto reg = nine_links(9);
    const auto dir = std::filesystem::temp_directory_path() / "hs_http_test";
    std::filesystem::create_directories(dir);
    const auto log_path = (dir / "access.log").string();
    std::filesystem::remove(log_path);
    std::vector<std::string> valid;
    for (const auto& [t, l] : reg.links())
        valid.push_back(t);

    std::atomic<int> good{0};
    {
        AccessLog log(std::make_shared<FileLogSink>(log_path));
        LinkServer core(reg, log);
        HttpServer server(core, {8});
        const int port = server.bind("127.0.0.1", 0);
        REQUIRE(port > 0);
        std::thread loop([&] { server.listen(); });
        server.wait_until_ready();

        constexpr int kThreads = 20, kPer = 10;
        std::vector<std::thread> clients;
        for (int t = 0; t < kThreads; ++t) {
            clients.emplace_back([&, t] {
                httplib::Client cli("127.0.0.1", port);
                for (int i = 0; i < kPer; ++i) {
                    const bool use_valid = (t + i) % 2 == 0;
                    const auto path = use_valid ? "/t/" + valid[(t * kPer + i) % valid.size()] : "/t/zzzzzz";
                    auto res = cli.Get(path);
                    if (res && res->status == (use_valid ? 302 : 404) &&
                        (!use_valid || res->get_header_value("Location") == "https://www.google.com/"))
                        ++good;
                }
            });
        }
        for (auto& c : clients)
            c.join();
        server.stop();
        loop.join();
        CHECK(log.written() == 200);
    }
    CHECK(good == 200);
    const auto read = read_access_log(log_path);
    CHECK(read.entries.size() == 200);
    CHECK(read.bad_lines == 0);
}

} // TEST_SUITE
