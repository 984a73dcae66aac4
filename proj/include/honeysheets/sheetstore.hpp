#pragma once

#include "honeysheets/time.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace honeysheets::sheetstore {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// "#rrggbb"
std::string to_hex(Rgb c);
Rgb rgb_from_hex(std::string_view hex);

struct CellFormat {
    int font_size = 10;
    Rgb text_color{0, 0, 0};
    Rgb background_color{255, 255, 255};

    friend bool operator==(const CellFormat&, const CellFormat&) = default;
};

struct Cell {
    std::string value;
    CellFormat format;

    friend bool operator==(const Cell&, const Cell&) = default;
};

using Row = std::vector<Cell>;
using Grid = std::vector<Row>;

inline constexpr int kDefaultColumnWidth = 100;

/// The decoy document. Column count is column_widths.size(); every row has
/// exactly that many cells, including when the grid has no rows.
struct HoneySheet {
    std::string sheet_id;
    Grid grid;
    std::vector<int> column_widths;
    std::string share_link;

    std::size_t row_count() const { return grid.size(); }
    std::size_t column_count() const { return column_widths.size(); }

    friend bool operator==(const HoneySheet&, const HoneySheet&) = default;
};

/// Throws Error(ConfigMismatch) when rows are ragged, widths are non-positive or
/// a font size is below 1.
void check_invariants(const HoneySheet& sheet);

struct Snapshot {
    std::string sheet_id;
    Timestamp taken_at;
    Grid grid;
    std::vector<int> column_widths;

    friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

Snapshot take_snapshot(const HoneySheet& sheet, Timestamp at);

struct CellChange {
    std::size_t row = 0;
    std::size_t col = 0;
    Cell before;
    Cell after;

    bool value_changed() const { return before.value != after.value; }
    bool format_changed() const { return before.format != after.format; }

    friend bool operator==(const CellChange&, const CellChange&) = default;
};

enum class StructuralKind { RowInserted, RowDeleted, ColInserted, ColDeleted };

struct StructuralChange {
    StructuralKind kind;
    std::size_t index = 0;

    friend bool operator==(const StructuralChange&, const StructuralChange&) = default;
};

struct LayoutChange {
    std::size_t col = 0;
    int old_width = 0;
    int new_width = 0;

    friend bool operator==(const LayoutChange&, const LayoutChange&) = default;
};

struct ChangeSet {
    std::vector<CellChange> cell_changes;
    std::vector<StructuralChange> structural_changes;
    std::vector<LayoutChange> layout_changes;

    bool empty() const {
        return cell_changes.empty() && structural_changes.empty() && layout_changes.empty();
    }

    friend bool operator==(const ChangeSet&, const ChangeSet&) = default;
};

/// Cell-by-cell and width-by-width difference between two captures of the same sheet.
///
/// When dimensions differ, rows and columns are aligned by index: the common
/// prefix is compared in place, surplus trailing rows/columns in `after` are
/// reported as insertions and surplus ones in `before` as deletions (highest
/// index first). Cells and widths of inserted rows/columns that differ from the
/// defaults appear as ordinary cell/layout changes, so apply_changes(before, diff)
/// always reproduces `after`.
///
/// Throws Error(SheetMismatch) when the snapshots belong to different sheets.
ChangeSet diff(const Snapshot& before, const Snapshot& after);

/// Replays a ChangeSet onto a captured state: structural changes in order, then
/// layout, then cell values/formats. Throws Error(BadIndex) when the ChangeSet
/// does not fit the snapshot.
Snapshot apply_changes(const Snapshot& before, const ChangeSet& changes);

enum class ModificationClass { Content, FormattingOnly, LayoutOnly, Structural, Mixed };

std::string_view to_string(ModificationClass c);
ModificationClass modification_class_from_string(std::string_view s);

/// Throws Error(EmptyChangeSet) on an empty ChangeSet.
ModificationClass classify(const ChangeSet& changes);

// Edit commands accepted by apply_edit.
struct SetValue {
    std::size_t row, col;
    std::string value;
    friend bool operator==(const SetValue&, const SetValue&) = default;
};
struct SetFormat {
    std::size_t row, col;
    CellFormat format;
    friend bool operator==(const SetFormat&, const SetFormat&) = default;
};
struct SetColumnWidth {
    std::size_t col;
    int width;
    friend bool operator==(const SetColumnWidth&, const SetColumnWidth&) = default;
};
struct InsertRow {
    std::size_t index;
    friend bool operator==(const InsertRow&, const InsertRow&) = default;
};
struct DeleteRow {
    std::size_t index;
    friend bool operator==(const DeleteRow&, const DeleteRow&) = default;
};
struct InsertColumn {
    std::size_t index;
    friend bool operator==(const InsertColumn&, const InsertColumn&) = default;
};
struct DeleteColumn {
    std::size_t index;
    friend bool operator==(const DeleteColumn&, const DeleteColumn&) = default;
};

using EditCommand =
    std::variant<SetValue, SetFormat, SetColumnWidth, InsertRow, DeleteRow, InsertColumn, DeleteColumn>;

/// Returns the edited sheet; the input is untouched. Inserted rows/columns get
/// default cells and kDefaultColumnWidth. Throws Error(BadIndex) for
/// out-of-range indices or a non-positive width.
HoneySheet apply_edit(HoneySheet sheet, const EditCommand& command);

/// In-place variant used by the replay loop.
void apply_edit_in_place(HoneySheet& sheet, const EditCommand& command);

enum class EventKind { Open, Modification };

std::string_view to_string(EventKind k);
EventKind event_kind_from_string(std::string_view s);

struct SheetEvent {
    std::string sheet_id;
    EventKind kind = EventKind::Open;
    std::optional<ModificationClass> modification_class;
    Timestamp occurred_at;
    /// Capture time of the snapshot that revealed a modification, when known.
    std::optional<Timestamp> snapshot_at;
    std::optional<ChangeSet> changeset;

    friend bool operator==(const SheetEvent&, const SheetEvent&) = default;
};

/// Throws Error(ConfigMismatch) when a modification lacks a non-empty ChangeSet
/// or class, or an open carries either.
void check_invariants(const SheetEvent& event);

// Canonical serialization. nlohmann::json objects keep keys sorted, so
// dump() output is byte-stable for equal values.
nlohmann::json to_json(const CellFormat& f);
nlohmann::json to_json(const Cell& c);
nlohmann::json to_json(const HoneySheet& sheet);
nlohmann::json to_json(const Snapshot& snap);
nlohmann::json to_json(const ChangeSet& changes);
nlohmann::json to_json(const EditCommand& command);
nlohmann::json to_json(const SheetEvent& event);

CellFormat cell_format_from_json(const nlohmann::json& j);
Cell cell_from_json(const nlohmann::json& j);
HoneySheet sheet_from_json(const nlohmann::json& j);
Snapshot snapshot_from_json(const nlohmann::json& j);
ChangeSet changeset_from_json(const nlohmann::json& j);
EditCommand edit_command_from_json(const nlohmann::json& j);
SheetEvent sheet_event_from_json(const nlohmann::json& j);

/// Canonical text of a sheet (compact JSON, sorted keys).
std::string serialize(const HoneySheet& sheet);
std::string serialize(const ChangeSet& changes);

HoneySheet load_sheet(const std::string& path);
void save_sheet(const HoneySheet& sheet, const std::string& path);

/// Reads either a sheet document or a Snapshot document; both carry the grid.
Snapshot load_snapshot(const std::string& path, Timestamp fallback_time);

/// Periodic capture helper: remembers the last snapshot per sheet and reports
/// the ChangeSet once the cadence has elapsed.
class SnapshotMonitor {
public:
    explicit SnapshotMonitor(Duration cadence) : cadence_(cadence) {}

    Duration cadence() const { return cadence_; }

    /// First capture of the cadence window that starts at or after `at`.
    Timestamp next_capture(Timestamp at) const;

    /// Takes a snapshot when none exists or the cadence elapsed since the last
    /// one; returns the non-empty difference to the previous capture, if any.
    std::optional<ChangeSet> observe(const HoneySheet& sheet, Timestamp at);

    const Snapshot* last(const std::string& sheet_id) const;

private:
    Duration cadence_;
    std::map<std::string, Snapshot> last_;
};

} // namespace honeysheets::sheetstore
