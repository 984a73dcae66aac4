#include "honeysheets/error.hpp"
#include "honeysheets/sheetstore.hpp"

#include <algorithm>
#include <string>

namespace honeysheets::sheetstore {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok)
        throw Error(Errc::BadIndex, what);
}

} // namespace

void check_invariants(const HoneySheet& sheet) {
    for (std::size_t r = 0; r < sheet.grid.size(); ++r) {
        if (sheet.grid[r].size() != sheet.column_widths.size())
            throw Error(Errc::ConfigMismatch, "row " + std::to_string(r) + " has " +
                                                  std::to_string(sheet.grid[r].size()) + " cells, expected " +
                                                  std::to_string(sheet.column_widths.size()));
        for (const Cell& cell : sheet.grid[r])
            if (cell.format.font_size < 1)
                throw Error(Errc::ConfigMismatch, "font size below 1 in row " + std::to_string(r));
    }
    for (int w : sheet.column_widths)
        if (w <= 0)
            throw Error(Errc::ConfigMismatch, "column width must be positive");
}

Snapshot take_snapshot(const HoneySheet& sheet, Timestamp at) {
    return Snapshot{sheet.sheet_id, at, sheet.grid, sheet.column_widths};
}

void apply_edit_in_place(HoneySheet& sheet, const EditCommand& command) {
    const std::size_t rows = sheet.row_count();
    const std::size_t cols = sheet.column_count();
    std::visit(
        [&](const auto& cmd) {
            using T = std::decay_t<decltype(cmd)>;
            if constexpr (std::is_same_v<T, SetValue>) {
                require(cmd.row < rows && cmd.col < cols, "set_value outside grid");
                sheet.grid[cmd.row][cmd.col].value = cmd.value;
            } else if constexpr (std::is_same_v<T, SetFormat>) {
                require(cmd.row < rows && cmd.col < cols, "set_format outside grid");
                require(cmd.format.font_size >= 1, "font size must be at least 1");
                sheet.grid[cmd.row][cmd.col].format = cmd.format;
            } else if constexpr (std::is_same_v<T, SetColumnWidth>) {
                require(cmd.col < cols, "set_column_width outside grid");
                require(cmd.width > 0, "column width must be positive");
                sheet.column_widths[cmd.col] = cmd.width;
            } else if constexpr (std::is_same_v<T, InsertRow>) {
                require(cmd.index <= rows, "insert_row past end");
                sheet.grid.insert(sheet.grid.begin() + static_cast<std::ptrdiff_t>(cmd.index), Row(cols));
            } else if constexpr (std::is_same_v<T, DeleteRow>) {
                require(cmd.index < rows, "delete_row outside grid");
                sheet.grid.erase(sheet.grid.begin() + static_cast<std::ptrdiff_t>(cmd.index));
            } else if constexpr (std::is_same_v<T, InsertColumn>) {
                require(cmd.index <= cols, "insert_col past end");
                const auto at = static_cast<std::ptrdiff_t>(cmd.index);
                for (Row& row : sheet.grid)
                    row.insert(row.begin() + at, Cell{});
                sheet.column_widths.insert(sheet.column_widths.begin() + at, kDefaultColumnWidth);
            } else if constexpr (std::is_same_v<T, DeleteColumn>) {
                require(cmd.index < cols, "delete_col outside grid");
                const auto at = static_cast<std::ptrdiff_t>(cmd.index);
                for (Row& row : sheet.grid)
                    row.erase(row.begin() + at);
                sheet.column_widths.erase(sheet.column_widths.begin() + at);
            }
        },
        command);
}

HoneySheet apply_edit(HoneySheet sheet, const EditCommand& command) {
    apply_edit_in_place(sheet, command);
    return sheet;
}

std::string_view to_string(ModificationClass c) {
    switch (c) {
    case ModificationClass::Content: return "content";
    case ModificationClass::FormattingOnly: return "formatting_only";
    case ModificationClass::LayoutOnly: return "layout_only";
    case ModificationClass::Structural: return "structural";
    case ModificationClass::Mixed: return "mixed";
    }
    return "mixed";
}

ModificationClass modification_class_from_string(std::string_view s) {
    for (auto c : {ModificationClass::Content, ModificationClass::FormattingOnly, ModificationClass::LayoutOnly,
                   ModificationClass::Structural, ModificationClass::Mixed})
        if (to_string(c) == s)
            return c;
    throw Error(Errc::ParseError, "unknown modification class '" + std::string(s) + "'");
}

// A cell change touching both value and format is neither pure content nor
// pure formatting, so it lands in Mixed.
ModificationClass classify(const ChangeSet& changes) {
    if (changes.empty())
        throw Error(Errc::EmptyChangeSet, "cannot classify an empty change set");

    const bool has_cells = !changes.cell_changes.empty();
    const bool has_structure = !changes.structural_changes.empty();
    const bool has_layout = !changes.layout_changes.empty();

    if (has_layout && !has_cells && !has_structure)
        return ModificationClass::LayoutOnly;
    if (has_structure && !has_cells && !has_layout)
        return ModificationClass::Structural;
    if (has_cells && !has_structure && !has_layout) {
        const auto& cc = changes.cell_changes;
        if (std::all_of(cc.begin(), cc.end(), [](const CellChange& c) { return c.value_changed() && !c.format_changed(); }))
            return ModificationClass::Content;
        if (std::all_of(cc.begin(), cc.end(), [](const CellChange& c) { return c.format_changed() && !c.value_changed(); }))
            return ModificationClass::FormattingOnly;
    }
    return ModificationClass::Mixed;
}

std::string_view to_string(EventKind k) {
    return k == EventKind::Open ? "open" : "modification";
}

EventKind event_kind_from_string(std::string_view s) {
    if (s == "open")
        return EventKind::Open;
    if (s == "modification")
        return EventKind::Modification;
    throw Error(Errc::ParseError, "unknown event kind '" + std::string(s) + "'");
}

void check_invariants(const SheetEvent& event) {
    if (event.sheet_id.empty())
        throw Error(Errc::ConfigMismatch, "event without sheet id");
    if (event.kind == EventKind::Modification) {
        if (!event.changeset || event.changeset->empty())
            throw Error(Errc::ConfigMismatch, "modification event needs a non-empty change set");
        if (!event.modification_class)
            throw Error(Errc::ConfigMismatch, "modification event needs a class");
    } else if (event.changeset || event.modification_class) {
        throw Error(Errc::ConfigMismatch, "open event carries modification data");
    }
}

Timestamp SnapshotMonitor::next_capture(Timestamp at) const {
    const auto ticks = at.time_since_epoch().count();
    const auto step = cadence_.count();
    const auto rem = ((ticks % step) + step) % step;
    return rem == 0 ? at : at + Duration{step - rem};
}

std::optional<ChangeSet> SnapshotMonitor::observe(const HoneySheet& sheet, Timestamp at) {
    auto it = last_.find(sheet.sheet_id);
    if (it == last_.end()) {
        last_.emplace(sheet.sheet_id, take_snapshot(sheet, at));
        return std::nullopt;
    }
    if (at - it->second.taken_at < cadence_)
        return std::nullopt;
    Snapshot current = take_snapshot(sheet, at);
    ChangeSet changes = diff(it->second, current);
    it->second = std::move(current);
    if (changes.empty())
        return std::nullopt;
    return changes;
}

const Snapshot* SnapshotMonitor::last(const std::string& sheet_id) const {
    auto it = last_.find(sheet_id);
    return it == last_.end() ? nullptr : &it->second;
}

} // namespace honeysheets::sheetstore
