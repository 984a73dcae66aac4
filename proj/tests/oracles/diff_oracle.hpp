#pragma once

// Brute-force expectation for sheet diffs: every cell position of `after` is
// compared with the same position of `before` (or a blank default cell when
// it lies outside `before`), every column width likewise.

#include "honeysheets/sheetstore.hpp"

#include <set>
#include <tuple>

namespace oracle {

using honeysheets::sheetstore::Cell;
using honeysheets::sheetstore::Snapshot;

struct DiffFacts {
    std::set<std::tuple<std::size_t, std::size_t, std::string, std::string>> value_changes;
    std::set<std::tuple<std::size_t, std::size_t>> format_changes;
    std::set<std::tuple<std::size_t, int, int>> width_changes;
    long row_delta = 0;
    long col_delta = 0;
};

inline DiffFacts brute_force(const Snapshot& before, const Snapshot& after) {
    DiffFacts f;
    const Cell blank{};
    for (std::size_t r = 0; r < after.grid.size(); ++r) {
        for (std::size_t c = 0; c < after.column_widths.size(); ++c) {
            const bool inside = r < before.grid.size() && c < before.column_widths.size();
            const Cell& b = inside ? before.grid[r][c] : blank;
            const Cell& a = after.grid[r][c];
            if (a.value != b.value)
                f.value_changes.emplace(r, c, b.value, a.value);
            if (a.format != b.format)
                f.format_changes.emplace(r, c);
        }
    }
    for (std::size_t c = 0; c < after.column_widths.size(); ++c) {
        const int old_w = c < before.column_widths.size() ? before.column_widths[c]
                                                          : honeysheets::sheetstore::kDefaultColumnWidth;
        if (old_w != after.column_widths[c])
            f.width_changes.emplace(c, old_w, after.column_widths[c]);
    }
    f.row_delta = static_cast<long>(after.grid.size()) - static_cast<long>(before.grid.size());
    f.col_delta = static_cast<long>(after.column_widths.size()) - static_cast<long>(before.column_widths.size());
    return f;
}

} // namespace oracle
