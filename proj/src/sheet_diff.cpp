#include "honeysheets/error.hpp"
#include "honeysheets/sheetstore.hpp"

#include <algorithm>

namespace honeysheets::sheetstore {

ChangeSet diff(const Snapshot& before, const Snapshot& after) {
    if (before.sheet_id != after.sheet_id)
        throw Error(Errc::SheetMismatch, "cannot diff '" + before.sheet_id + "' against '" + after.sheet_id + "'");

    ChangeSet out;
    const std::size_t rows_before = before.grid.size();
    const std::size_t rows_after = after.grid.size();
    const std::size_t cols_before = before.column_widths.size();
    const std::size_t cols_after = after.column_widths.size();

    // Tail alignment: deletions run from the highest index down so that each
    // index is valid at the moment it is applied.
    for (std::size_t r = rows_before; r > rows_after; --r)
        out.structural_changes.push_back({StructuralKind::RowDeleted, r - 1});
    for (std::size_t r = rows_before; r < rows_after; ++r)
        out.structural_changes.push_back({StructuralKind::RowInserted, r});
    for (std::size_t c = cols_before; c > cols_after; --c)
        out.structural_changes.push_back({StructuralKind::ColDeleted, c - 1});
    for (std::size_t c = cols_before; c < cols_after; ++c)
        out.structural_changes.push_back({StructuralKind::ColInserted, c});

    for (std::size_t c = 0; c < cols_after; ++c) {
        const int old_width = c < cols_before ? before.column_widths[c] : kDefaultColumnWidth;
        if (old_width != after.column_widths[c])
            out.layout_changes.push_back({c, old_width, after.column_widths[c]});
    }

    static const Cell blank{};
    for (std::size_t r = 0; r < rows_after; ++r) {
        for (std::size_t c = 0; c < cols_after; ++c) {
            const Cell& old_cell = (r < rows_before && c < cols_before) ? before.grid[r][c] : blank;
            const Cell& new_cell = after.grid[r][c];
            if (old_cell != new_cell)
                out.cell_changes.push_back({r, c, old_cell, new_cell});
        }
    }
    return out;
}

Snapshot apply_changes(const Snapshot& before, const ChangeSet& changes) {
    HoneySheet work{before.sheet_id, before.grid, before.column_widths, {}};
    for (const StructuralChange& s : changes.structural_changes) {
        switch (s.kind) {
        case StructuralKind::RowInserted: apply_edit_in_place(work, InsertRow{s.index}); break;
        case StructuralKind::RowDeleted: apply_edit_in_place(work, DeleteRow{s.index}); break;
        case StructuralKind::ColInserted: apply_edit_in_place(work, InsertColumn{s.index}); break;
        case StructuralKind::ColDeleted: apply_edit_in_place(work, DeleteColumn{s.index}); break;
        }
    }
    for (const LayoutChange& l : changes.layout_changes)
        apply_edit_in_place(work, SetColumnWidth{l.col, l.new_width});
    for (const CellChange& c : changes.cell_changes) {
        if (c.row >= work.row_count() || c.col >= work.column_count())
            throw Error(Errc::BadIndex, "cell change outside grid");
        work.grid[c.row][c.col] = c.after;
    }
    return Snapshot{before.sheet_id, before.taken_at, std::move(work.grid), std::move(work.column_widths)};
}

} // namespace honeysheets::sheetstore
