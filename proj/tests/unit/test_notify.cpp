#include "honeysheets/error.hpp"
#include "honeysheets/notify.hpp"
#include "sheet_gen.hpp"
#include "tmpdir.hpp"

#include <doctest.h>

#include <fstream>
#include <set>

using namespace honeysheets;
using namespace honeysheets::sheetstore;
using namespace honeysheets::notify;
namespace fs = std::filesystem;

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

SheetEvent open_event(const std::string& sheet, Timestamp at) {
    SheetEvent e;
    e.sheet_id = sheet;
    e.kind = EventKind::Open;
    e.occurred_at = at;
    return e;
}

ChangeSet deletion() {
    ChangeSet cs;
    cs.cell_changes.push_back({3, 2, {"GB82WEST12345698765432"}, {""}});
    return cs;
}

SheetEvent mod_event(const std::string& sheet, Timestamp at, ChangeSet cs) {
    SheetEvent e;
    e.sheet_id = sheet;
    e.kind = EventKind::Modification;
    e.modification_class = classify(cs);
    e.occurred_at = at;
    e.snapshot_at = at + std::chrono::hours{1};
    e.changeset = std::move(cs);
    return e;
}

SheetEvent random_event(Rng& rng) {
    const Timestamp at = parse_iso_or_throw("2016-01-23T00:00:00Z") +
                         std::chrono::microseconds{static_cast<std::int64_t>(rng.below(6'000'000'000'000ULL))};
    const std::string sheet = "hs-" + std::to_string(rng.below(5));
    if (rng.chance(0.5))
        return open_event(sheet, at);
    for (;;) {
        const auto before = testgen::random_snapshot(rng, rng.below(6) + 1, rng.below(6) + 1, sheet);
        const auto after = testgen::mutate(rng, before);
        auto cs = diff(before, after);
        if (!cs.empty()) {
            auto e = mod_event(sheet, at, std::move(cs));
            if (rng.chance(0.3))
                e.snapshot_at.reset();
            return e;
        }
    }
}

std::vector<fs::path> messages(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".msg")
            out.push_back(e.path());
    return out;
}

} // namespace

TEST_SUITE("notify") {

TEST_CASE("open notification has an empty body") {
    const auto text = render_notification(open_event("hs-1", parse_iso_or_throw("2016-01-23T09:00:00Z")));
    CHECK(text.find("Event-Type: open\n") != std::string::npos);
    CHECK(text.find("Content-Length: 0\n") != std::string::npos);
    CHECK(text.substr(text.size() - 2) == "\n\n");
}

TEST_CASE("deletion round trips through the wire format") {
    const auto e = mod_event("hs-1", parse_iso_or_throw("2016-02-01T10:15:00Z"), deletion());
    const auto back = parse_notification(render_notification(e));
    CHECK(back == e);
    CHECK(*back.changeset == deletion());
    CHECK(back.modification_class == ModificationClass::Content);
}

TEST_CASE("property: parse(emit(e)) == e") {
    Rng rng(77);
    for (int i = 0; i < 300; ++i) {
        const auto e = random_event(rng);
        REQUIRE(parse_notification(render_notification(e)) == e);
    }
}

TEST_CASE("malformed messages") {
    const auto good = render_notification(mod_event("hs-1", Timestamp{}, deletion()));
    CHECK(code_of([&] { parse_notification(good.substr(0, good.size() - 5)); }) == Errc::ParseError);
    CHECK(code_of([&] { parse_notification(""); }) == Errc::ParseError);
    CHECK(code_of([&] { parse_notification("Sheet-ID: x\n\n"); }) == Errc::ParseError);
    std::string dup = good;
    dup.insert(0, "Sheet-ID: other\n");
    CHECK(code_of([&] { parse_notification(dup); }) == Errc::ParseError);
}

TEST_CASE("invalid events are not rendered") {
    SheetEvent e = open_event("hs-1", Timestamp{});
    e.changeset = deletion();
    CHECK(code_of([&] { render_notification(e); }) == Errc::ConfigMismatch);
    SheetEvent m = mod_event("hs-1", Timestamp{}, deletion());
    m.changeset = ChangeSet{};
    CHECK(code_of([&] { render_notification(m); }) == Errc::ConfigMismatch);
    CHECK(code_of([&] { render_notification(open_event("bad\nid", Timestamp{})); }) == Errc::ConfigMismatch);
}

TEST_CASE("emission names are unique and ingestion is order independent") {
    testutil::TempDir a("mbA"), b("mbB");
    Rng rng(11);
    std::vector<SheetEvent> events;
    for (int i = 0; i < 60; ++i)
        events.push_back(random_event(rng));
    events.push_back(events.front()); // duplicate delivery

    std::set<std::string> names;
    for (const auto& e : events)
        names.insert(emit_notification(e, a.path));
    CHECK(names.size() == events.size());

    auto shuffled = events;
    rng.shuffle(shuffled);
    for (const auto& e : shuffled)
        emit_notification(e, b.path);

    const auto ra = ingest_mailbox(a.path);
    const auto rb = ingest_mailbox(b.path);
    CHECK(ra.quarantined == 0);
    CHECK(ra.timeline == rb.timeline);
    CHECK(ra.timeline.events.size() == events.size() - 1);
    for (std::size_t i = 1; i < ra.timeline.events.size(); ++i)
        CHECK_FALSE(ra.timeline.events[i].occurred_at < ra.timeline.events[i - 1].occurred_at);
    CHECK_FALSE((fs::exists(a.path / "tmp") && !fs::is_empty(a.path / "tmp")));
}

TEST_CASE("empty mailbox") {
    testutil::TempDir d("mbE");
    const auto r = ingest_mailbox(d.path);
    CHECK(r.timeline.events.empty());
    CHECK(r.quarantined == 0);
}

TEST_CASE("field-scale kind counts survive ingestion") {
    testutil::TempDir d("mbP");
    const Timestamp t0 = parse_iso_or_throw("2016-01-23T00:00:00Z");
    for (int i = 0; i < 112; ++i)
        emit_notification(open_event("hs-" + std::to_string(i % 5), t0 + std::chrono::minutes{37 * i}), d.path);
    for (int i = 0; i < 17; ++i) {
        ChangeSet cs;
        cs.layout_changes.push_back({static_cast<std::size_t>(i % 5), 100, 140 + i});
        emit_notification(mod_event("hs-" + std::to_string(i % 5), t0 + std::chrono::minutes{91 * i}, cs), d.path);
    }
    const auto r = ingest_mailbox(d.path);
    CHECK(r.timeline.events.size() == 129);
    CHECK(r.timeline.count(EventKind::Open) == 112);
    CHECK(r.timeline.count(EventKind::Modification) == 17);
}

TEST_CASE("truncated file is quarantined") {
    testutil::TempDir d("mbQ");
    const Timestamp t0 = parse_iso_or_throw("2016-01-23T00:00:00Z");
    std::string victim;
    for (int i = 0; i < 10; ++i) {
        const auto name =
            emit_notification(mod_event("hs-1", t0 + std::chrono::minutes{i}, deletion()), d.path);
        if (i == 4)
            victim = name;
    }
    const auto path = d.path / victim;
    const auto size = fs::file_size(path);
    fs::resize_file(path, size - 7);

    const auto r = ingest_mailbox(d.path);
    CHECK(r.timeline.events.size() == 9);
    CHECK(r.quarantined == 1);
    CHECK(fs::exists(d.path / "bad" / victim));
    CHECK(messages(d.path).size() == 9);
}

TEST_CASE("unwritable mailbox") {
    testutil::TempDir d("mbW");
    const auto file = d / "not-a-dir";
    std::ofstream(file) << "x";
    CHECK(code_of([&] { emit_notification(open_event("hs-1", Timestamp{}), file); }) == Errc::MailboxError);
}

TEST_CASE("timeline json round trip") {
    Rng rng(3);
    std::vector<SheetEvent> events;
    for (int i = 0; i < 20; ++i)
        events.push_back(random_event(rng));
    const auto t = make_timeline(events);
    CHECK(timeline_from_json(to_json(t)) == t);
}

} // TEST_SUITE
