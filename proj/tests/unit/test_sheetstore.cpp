#include "../oracles/diff_oracle.hpp"
#include "honeysheets/error.hpp"
#include "honeysheets/sheetstore.hpp"
#include "sheet_gen.hpp"

#include <doctest.h>

using namespace honeysheets;
using namespace honeysheets::sheetstore;

namespace {

HoneySheet small_sheet() {
    HoneySheet s;
    s.sheet_id = "hs-test";
    s.column_widths = {100, 100, 100, 100, 100};
    s.grid = {{{"Name"}, {"Role"}, {"IBAN"}, {"Sort code"}, {"Pay"}},
              {{"A B"}, {"Clerk"}, {"GB82WEST12345698765432"}, {"12-34-56"}, {"1,000.00"}}};
    return s;
}

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return Errc::IoError;
}

oracle::DiffFacts facts_of(const ChangeSet& cs) {
    oracle::DiffFacts f;
    for (const auto& c : cs.cell_changes) {
        if (c.value_changed())
            f.value_changes.emplace(c.row, c.col, c.before.value, c.after.value);
        if (c.format_changed())
            f.format_changes.emplace(c.row, c.col);
    }
    for (const auto& l : cs.layout_changes)
        f.width_changes.emplace(l.col, l.old_width, l.new_width);
    for (const auto& s : cs.structural_changes) {
        switch (s.kind) {
        case StructuralKind::RowInserted:
            ++f.row_delta;
            break;
        case StructuralKind::RowDeleted:
            --f.row_delta;
            break;
        case StructuralKind::ColInserted:
            ++f.col_delta;
            break;
        case StructuralKind::ColDeleted:
            --f.col_delta;
            break;
        }
    }
    return f;
}

bool same(const oracle::DiffFacts& a, const oracle::DiffFacts& b) {
    return a.value_changes == b.value_changes && a.format_changes == b.format_changes &&
           a.width_changes == b.width_changes && a.row_delta == b.row_delta && a.col_delta == b.col_delta;
}

} // namespace

TEST_SUITE("sheetstore") {

TEST_CASE("snapshot is a deep copy") {
    auto s = small_sheet();
    const auto snap = take_snapshot(s, Timestamp{});
    apply_edit_in_place(s, SetValue{0, 0, "changed"});
    CHECK(snap.grid[0][0].value == "Name");
}

TEST_CASE("identity diffs are empty") {
    const auto s = small_sheet();
    CHECK(diff(take_snapshot(s, Timestamp{}), take_snapshot(s, Timestamp{} + std::chrono::hours{2})).empty());
}

TEST_CASE("deleting an account number") {
    auto s = small_sheet();
    const auto before = take_snapshot(s, Timestamp{});
    apply_edit_in_place(s, SetValue{1, 2, ""});
    const auto cs = diff(before, take_snapshot(s, Timestamp{}));
    REQUIRE(cs.cell_changes.size() == 1);
    CHECK(cs.cell_changes[0].after.value == "");
    CHECK(cs.cell_changes[0].row == 1);
    CHECK(cs.cell_changes[0].col == 2);
    CHECK(classify(cs) == ModificationClass::Content);
}

TEST_CASE("widening one column") {
    auto s = small_sheet();
    const auto before = take_snapshot(s, Timestamp{});
    apply_edit_in_place(s, SetColumnWidth{4, 240});
    const auto cs = diff(before, take_snapshot(s, Timestamp{}));
    CHECK(cs.cell_changes.empty());
    REQUIRE(cs.layout_changes.size() == 1);
    CHECK(cs.layout_changes[0] == LayoutChange{4, 100, 240});
    CHECK(classify(cs) == ModificationClass::LayoutOnly);
}

TEST_CASE("classification") {
    ChangeSet content;
    content.cell_changes.push_back({0, 0, {"x"}, {"y"}});
    CHECK(classify(content) == ModificationClass::Content);

    ChangeSet fmt;
    Cell bold{"x"};
    bold.format.font_size = 14;
    fmt.cell_changes.push_back({0, 0, {"x"}, bold});
    CHECK(classify(fmt) == ModificationClass::FormattingOnly);

    ChangeSet link_swap;
    Cell replaced{"https://short.example.net/abc123"};
    replaced.format.background_color = {255, 0, 0};
    link_swap.cell_changes.push_back({1, 5, {"https://hs.example.org/t/AbC123"}, replaced});
    CHECK(classify(link_swap) == ModificationClass::Mixed);

    ChangeSet structural;
    structural.structural_changes.push_back({StructuralKind::RowInserted, 3});
    CHECK(classify(structural) == ModificationClass::Structural);

    ChangeSet both = content;
    both.layout_changes.push_back({0, 100, 200});
    CHECK(classify(both) == ModificationClass::Mixed);

    CHECK(code_of([] { classify(ChangeSet{}); }) == Errc::EmptyChangeSet);
}

TEST_CASE("edit commands") {
    auto s = small_sheet();
    s = apply_edit(s, SetValue{0, 0, "\\PWNED"});
    CHECK(s.grid[0][0].value == "\\PWNED");

    const auto grown = apply_edit(s, InsertRow{0});
    CHECK(grown.row_count() == 3);
    CHECK(grown.grid[0] == Row(5));
    CHECK(grown.grid[1][0].value == "\\PWNED");

    const auto wider = apply_edit(s, InsertColumn{5});
    CHECK(wider.column_count() == 6);
    CHECK(wider.column_widths[5] == kDefaultColumnWidth);

    const auto narrower = apply_edit(s, DeleteColumn{0});
    CHECK(narrower.grid[0][0].value == "Role");

    CHECK(code_of([&] { apply_edit(s, DeleteColumn{5}); }) == Errc::BadIndex);
    CHECK(code_of([&] { apply_edit(s, SetValue{2, 0, "x"}); }) == Errc::BadIndex);
    CHECK(code_of([&] { apply_edit(s, SetColumnWidth{0, 0}); }) == Errc::BadIndex);
    CHECK(code_of([&] { apply_edit(s, DeleteRow{9}); }) == Errc::BadIndex);
}

TEST_CASE("diff rejects different sheets") {
    auto a = take_snapshot(small_sheet(), Timestamp{});
    auto b = a;
    b.sheet_id = "other";
    CHECK(code_of([&] { diff(a, b); }) == Errc::SheetMismatch);
}

TEST_CASE("property: diff matches the oracle and apply reproduces after") {
    Rng rng(2024);
    for (int i = 0; i < 300; ++i) {
        const auto rows = rng.below(12);
        const auto cols = rng.below(8);
        const auto before = testgen::random_snapshot(rng, rows, cols);
        const auto after = rng.chance(0.5) ? testgen::mutate(rng, before)
                                           : testgen::random_snapshot(rng, rng.below(12), rng.below(8));
        const auto cs = diff(before, after);
        REQUIRE(same(facts_of(cs), oracle::brute_force(before, after)));
        const auto rebuilt = apply_changes(before, cs);
        REQUIRE(rebuilt.grid == after.grid);
        REQUIRE(rebuilt.column_widths == after.column_widths);
    }
}

TEST_CASE("edits keep sheet invariants") {
    Rng rng(99);
    auto s = small_sheet();
    for (int i = 0; i < 500; ++i) {
        EditCommand e;
        const auto r = s.row_count(), c = s.column_count();
        switch (rng.below(7)) {
        case 0:
            e = InsertRow{rng.below(r + 1)};
            break;
        case 1:
            e = InsertColumn{rng.below(c + 1)};
            break;
        case 2:
            if (r == 0)
                continue;
            e = DeleteRow{rng.below(r)};
            break;
        case 3:
            if (c == 0)
                continue;
            e = DeleteColumn{rng.below(c)};
            break;
        case 4:
            if (c == 0)
                continue;
            e = SetColumnWidth{rng.below(c), static_cast<int>(rng.between(1, 500))};
            break;
        default:
            if (r == 0 || c == 0)
                continue;
            e = SetValue{rng.below(r), rng.below(c), "v" + std::to_string(i)};
        }
        apply_edit_in_place(s, e);
        REQUIRE_NOTHROW(check_invariants(s));
    }
}

TEST_CASE("serialization round trips") {
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const auto before = testgen::random_snapshot(rng, rng.below(6), rng.below(6));
        const auto after = testgen::mutate(rng, before);
        const auto cs = diff(before, after);
        CHECK(changeset_from_json(to_json(cs)) == cs);
        CHECK(snapshot_from_json(to_json(after)) == after);
    }
    const auto s = small_sheet();
    CHECK(sheet_from_json(to_json(s)) == s);
    CHECK(serialize(sheet_from_json(nlohmann::json::parse(serialize(s)))) == serialize(s));

    for (const EditCommand& e : std::vector<EditCommand>{SetValue{1, 2, "x"}, SetFormat{0, 0, CellFormat{12}},
                                                          SetColumnWidth{3, 77}, InsertRow{1}, DeleteRow{0},
                                                          InsertColumn{2}, DeleteColumn{1}})
        CHECK(edit_command_from_json(to_json(e)) == e);
}

TEST_CASE("malformed documents raise ParseError") {
    CHECK(code_of([] { sheet_from_json(nlohmann::json::parse(R"({"sheet_id": 3})")); }) == Errc::ParseError);
    CHECK(code_of([] { edit_command_from_json(nlohmann::json::parse(R"({"op": "explode"})")); }) ==
          Errc::ParseError);
}

TEST_CASE("snapshot monitor") {
    SnapshotMonitor mon(std::chrono::hours{2});
    auto s = small_sheet();
    const Timestamp t0 = parse_iso_or_throw("2016-01-23T09:00:00Z");
    CHECK(mon.next_capture(t0) == t0 + std::chrono::hours{1});
    CHECK_FALSE(mon.observe(s, t0).has_value());
    apply_edit_in_place(s, SetValue{1, 2, ""});
    CHECK_FALSE(mon.observe(s, t0 + std::chrono::minutes{30}).has_value());
    const auto cs = mon.observe(s, t0 + std::chrono::hours{2});
    REQUIRE(cs.has_value());
    CHECK(cs->cell_changes.size() == 1);
    CHECK_FALSE(mon.observe(s, t0 + std::chrono::hours{4}).has_value());
}

} // TEST_SUITE
