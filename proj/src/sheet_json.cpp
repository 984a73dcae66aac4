#include "detail.hpp"
#include "honeysheets/error.hpp"
#include "honeysheets/sheetstore.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace honeysheets {

namespace detail {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw Error(Errc::IoError, "cannot read " + path.string());
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(Errc::IoError, "cannot write " + path.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out)
            throw Error(Errc::IoError, "short write to " + path.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw Error(Errc::IoError, "cannot rename into " + path.string() + ": " + ec.message());
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    return parse_guard(path.string(), [&] { return nlohmann::json::parse(text); });
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

} // namespace detail

namespace sheetstore {

using nlohmann::json;

std::string to_hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

Rgb rgb_from_hex(std::string_view hex) {
    if (hex.size() != 7 || hex[0] != '#')
        throw Error(Errc::ParseError, "bad color '" + std::string(hex) + "'");
    auto nibble = [&](char ch) -> unsigned {
        if (ch >= '0' && ch <= '9')
            return static_cast<unsigned>(ch - '0');
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        if (ch >= 'a' && ch <= 'f')
            return static_cast<unsigned>(ch - 'a' + 10);
        throw Error(Errc::ParseError, "bad color '" + std::string(hex) + "'");
    };
    auto byte = [&](std::size_t i) { return static_cast<std::uint8_t>(nibble(hex[i]) * 16 + nibble(hex[i + 1])); };
    return Rgb{byte(1), byte(3), byte(5)};
}

json to_json(const CellFormat& f) {
    return json{{"font_size", f.font_size},
                {"text_color", to_hex(f.text_color)},
                {"background_color", to_hex(f.background_color)}};
}

json to_json(const Cell& c) {
    return json{{"value", c.value}, {"format", to_json(c.format)}};
}

namespace {

json grid_to_json(const Grid& grid) {
    json rows = json::array();
    for (const Row& row : grid) {
        json cells = json::array();
        for (const Cell& cell : row)
            cells.push_back(to_json(cell));
        rows.push_back(std::move(cells));
    }
    return rows;
}

Grid grid_from_json(const json& j) {
    Grid grid;
    for (const json& row : j.at("grid")) {
        Row cells;
        for (const json& cell : row)
            cells.push_back(cell_from_json(cell));
        grid.push_back(std::move(cells));
    }
    return grid;
}

std::string_view to_string(StructuralKind k) {
    switch (k) {
    case StructuralKind::RowInserted: return "row_inserted";
    case StructuralKind::RowDeleted: return "row_deleted";
    case StructuralKind::ColInserted: return "col_inserted";
    case StructuralKind::ColDeleted: return "col_deleted";
    }
    return "";
}

StructuralKind structural_kind_from_string(std::string_view s) {
    for (auto k : {StructuralKind::RowInserted, StructuralKind::RowDeleted, StructuralKind::ColInserted,
                   StructuralKind::ColDeleted})
        if (to_string(k) == s)
            return k;
    throw Error(Errc::ParseError, "unknown structural change '" + std::string(s) + "'");
}

} // namespace

json to_json(const HoneySheet& sheet) {
    return json{{"sheet_id", sheet.sheet_id},
                {"grid", grid_to_json(sheet.grid)},
                {"column_widths", sheet.column_widths},
                {"share_link", sheet.share_link}};
}

json to_json(const Snapshot& snap) {
    return json{{"sheet_id", snap.sheet_id},
                {"taken_at", format_iso(snap.taken_at)},
                {"grid", grid_to_json(snap.grid)},
                {"column_widths", snap.column_widths}};
}

json to_json(const ChangeSet& changes) {
    json cells = json::array();
    for (const CellChange& c : changes.cell_changes)
        cells.push_back({{"row", c.row}, {"col", c.col}, {"before", to_json(c.before)}, {"after", to_json(c.after)}});
    json structure = json::array();
    for (const StructuralChange& s : changes.structural_changes)
        structure.push_back({{"kind", to_string(s.kind)}, {"index", s.index}});
    json layout = json::array();
    for (const LayoutChange& l : changes.layout_changes)
        layout.push_back({{"col", l.col}, {"old_width", l.old_width}, {"new_width", l.new_width}});
    return json{{"cell_changes", std::move(cells)},
                {"structural_changes", std::move(structure)},
                {"layout_changes", std::move(layout)}};
}

json to_json(const EditCommand& command) {
    return std::visit(
        [](const auto& cmd) -> json {
            using T = std::decay_t<decltype(cmd)>;
            if constexpr (std::is_same_v<T, SetValue>)
                return {{"op", "set_value"}, {"row", cmd.row}, {"col", cmd.col}, {"value", cmd.value}};
            else if constexpr (std::is_same_v<T, SetFormat>)
                return {{"op", "set_format"}, {"row", cmd.row}, {"col", cmd.col}, {"format", to_json(cmd.format)}};
            else if constexpr (std::is_same_v<T, SetColumnWidth>)
                return {{"op", "set_column_width"}, {"col", cmd.col}, {"width", cmd.width}};
            else if constexpr (std::is_same_v<T, InsertRow>)
                return {{"op", "insert_row"}, {"index", cmd.index}};
            else if constexpr (std::is_same_v<T, DeleteRow>)
                return {{"op", "delete_row"}, {"index", cmd.index}};
            else if constexpr (std::is_same_v<T, InsertColumn>)
                return {{"op", "insert_col"}, {"index", cmd.index}};
            else
                return {{"op", "delete_col"}, {"index", cmd.index}};
        },
        command);
}

json to_json(const SheetEvent& event) {
    json j{{"sheet_id", event.sheet_id},
           {"kind", to_string(event.kind)},
           {"occurred_at", format_iso(event.occurred_at)}};
    if (event.modification_class)
        j["modification_class"] = to_string(*event.modification_class);
    if (event.snapshot_at)
        j["snapshot_at"] = format_iso(*event.snapshot_at);
    if (event.changeset)
        j["changeset"] = to_json(*event.changeset);
    return j;
}

CellFormat cell_format_from_json(const json& j) {
    return detail::parse_guard("cell format", [&] {
        CellFormat f;
        f.font_size = j.at("font_size").get<int>();
        f.text_color = rgb_from_hex(j.at("text_color").get<std::string>());
        f.background_color = rgb_from_hex(j.at("background_color").get<std::string>());
        if (f.font_size < 1)
            throw Error(Errc::ParseError, "font size below 1");
        return f;
    });
}

Cell cell_from_json(const json& j) {
    return detail::parse_guard("cell", [&] {
        return Cell{j.at("value").get<std::string>(), cell_format_from_json(j.at("format"))};
    });
}

HoneySheet sheet_from_json(const json& j) {
    HoneySheet sheet = detail::parse_guard("sheet", [&] {
        HoneySheet s;
        s.sheet_id = j.at("sheet_id").get<std::string>();
        s.grid = grid_from_json(j);
        s.column_widths = j.at("column_widths").get<std::vector<int>>();
        s.share_link = j.at("share_link").get<std::string>();
        return s;
    });
    try {
        check_invariants(sheet);
    } catch (const Error& e) {
        throw Error(Errc::ParseError, e.what());
    }
    return sheet;
}

Snapshot snapshot_from_json(const json& j) {
    return detail::parse_guard("snapshot", [&] {
        Snapshot s;
        s.sheet_id = j.at("sheet_id").get<std::string>();
        s.taken_at = parse_iso_or_throw(j.at("taken_at").get<std::string>());
        s.grid = grid_from_json(j);
        s.column_widths = j.at("column_widths").get<std::vector<int>>();
        return s;
    });
}

ChangeSet changeset_from_json(const json& j) {
    return detail::parse_guard("change set", [&] {
        ChangeSet out;
        for (const json& c : j.at("cell_changes"))
            out.cell_changes.push_back({detail::index_at(c, "row"), detail::index_at(c, "col"),
                                        cell_from_json(c.at("before")), cell_from_json(c.at("after"))});
        for (const json& s : j.at("structural_changes"))
            out.structural_changes.push_back(
                {structural_kind_from_string(s.at("kind").get<std::string>()), detail::index_at(s, "index")});
        for (const json& l : j.at("layout_changes"))
            out.layout_changes.push_back(
                {detail::index_at(l, "col"), l.at("old_width").get<int>(), l.at("new_width").get<int>()});
        return out;
    });
}

EditCommand edit_command_from_json(const json& j) {
    return detail::parse_guard("edit command", [&]() -> EditCommand {
        const auto op = j.at("op").get<std::string>();
        if (op == "set_value")
            return SetValue{detail::index_at(j, "row"), detail::index_at(j, "col"), j.at("value").get<std::string>()};
        if (op == "set_format")
            return SetFormat{detail::index_at(j, "row"), detail::index_at(j, "col"), cell_format_from_json(j.at("format"))};
        if (op == "set_column_width")
            return SetColumnWidth{detail::index_at(j, "col"), j.at("width").get<int>()};
        if (op == "insert_row")
            return InsertRow{detail::index_at(j, "index")};
        if (op == "delete_row")
            return DeleteRow{detail::index_at(j, "index")};
        if (op == "insert_col")
            return InsertColumn{detail::index_at(j, "index")};
        if (op == "delete_col")
            return DeleteColumn{detail::index_at(j, "index")};
        throw Error(Errc::ParseError, "unknown edit op '" + op + "'");
    });
}

SheetEvent sheet_event_from_json(const json& j) {
    return detail::parse_guard("sheet event", [&] {
        SheetEvent e;
        e.sheet_id = j.at("sheet_id").get<std::string>();
        e.kind = event_kind_from_string(j.at("kind").get<std::string>());
        e.occurred_at = parse_iso_or_throw(j.at("occurred_at").get<std::string>());
        if (j.contains("modification_class"))
            e.modification_class = modification_class_from_string(j.at("modification_class").get<std::string>());
        if (j.contains("snapshot_at"))
            e.snapshot_at = parse_iso_or_throw(j.at("snapshot_at").get<std::string>());
        if (j.contains("changeset"))
            e.changeset = changeset_from_json(j.at("changeset"));
        return e;
    });
}

std::string serialize(const HoneySheet& sheet) {
    return detail::dump(to_json(sheet));
}

std::string serialize(const ChangeSet& changes) {
    return detail::dump(to_json(changes));
}

HoneySheet load_sheet(const std::string& path) {
    return sheet_from_json(detail::read_json_file(path));
}

void save_sheet(const HoneySheet& sheet, const std::string& path) {
    detail::write_file(path, serialize(sheet) + "\n");
}

Snapshot load_snapshot(const std::string& path, Timestamp fallback_time) {
    const json j = detail::read_json_file(path);
    if (j.contains("taken_at"))
        return snapshot_from_json(j);
    return take_snapshot(sheet_from_json(j), fallback_time);
}

} // namespace sheetstore
} // namespace honeysheets
