#pragma once

// Random grids for the property tests.

#include "honeysheets/rng.hpp"
#include "honeysheets/sheetstore.hpp"

namespace testgen {

using namespace honeysheets;
using namespace honeysheets::sheetstore;

inline Cell random_cell(Rng& rng) {
    static const char* values[] = {"", "a", "b", "GB82WEST12345698765432", "1,000.00", "x y", "\xc3\xa9t\xc3\xa9"};
    Cell c;
    c.value = values[rng.below(std::size(values))];
    if (rng.chance(0.2))
        c.format.font_size = static_cast<int>(rng.between(6, 24));
    if (rng.chance(0.1))
        c.format.background_color = {static_cast<std::uint8_t>(rng.below(256)), 0, 0};
    return c;
}

inline Snapshot random_snapshot(Rng& rng, std::size_t rows, std::size_t cols, const std::string& id = "s") {
    Snapshot s;
    s.sheet_id = id;
    s.grid.assign(rows, Row(cols));
    for (auto& row : s.grid)
        for (auto& c : row)
            c = random_cell(rng);
    s.column_widths.resize(cols);
    for (auto& w : s.column_widths)
        w = rng.chance(0.7) ? kDefaultColumnWidth : static_cast<int>(rng.between(20, 400));
    return s;
}

/// Copy of `s` with a random number of cells and widths perturbed.
inline Snapshot mutate(Rng& rng, Snapshot s) {
    if (s.grid.empty() || s.column_widths.empty())
        return s;
    const auto edits = rng.below(8);
    for (std::uint64_t i = 0; i < edits; ++i) {
        const auto r = rng.below(s.grid.size());
        const auto c = rng.below(s.column_widths.size());
        switch (rng.below(3)) {
        case 0:
            s.grid[r][c] = random_cell(rng);
            break;
        case 1:
            s.grid[r][c].format.text_color = {0, static_cast<std::uint8_t>(rng.below(256)), 0};
            break;
        default:
            s.column_widths[c] = static_cast<int>(rng.between(20, 400));
        }
    }
    return s;
}

} // namespace testgen
