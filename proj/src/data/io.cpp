#include "dltune/data/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dltune/common/csv.hpp"

namespace dltune {
namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_missing(std::string_view token) {
    const auto t = lower(trim(token));
    return t.empty() || t == "?" || t == "na" || t == "nan";
}

// Raw string cells plus per-column declarations, shared by both readers.
struct RawColumn {
    std::string name;
    // Declared ARFF nominal levels; empty for CSV and ARFF numeric/string.
    std::vector<std::string> declared_levels;
    bool declared_numeric = false;
};

struct RawTable {
    std::vector<RawColumn> columns;
    std::vector<std::vector<std::string>> cells;
    std::vector<std::size_t> lines;  // source line per row
};

std::size_t resolve_label(const RawTable& raw, const LabelSelector& label) {
    if (const auto* index = std::get_if<std::size_t>(&label)) {
        if (*index >= raw.columns.size())
            throw ParseError("label column index " + std::to_string(*index) + " out of range", 1);
        return *index;
    }
    const auto& name = std::get<std::string>(label);
    for (std::size_t c = 0; c < raw.columns.size(); ++c)
        if (raw.columns[c].name == name) return c;
    throw ParseError("unknown label column '" + name + "'", 1);
}

DataTable build_table(const RawTable& raw, const LabelSelector& label) {
    if (raw.cells.empty()) throw ParseError("no data rows", 1);
    const std::size_t n_cols = raw.columns.size();
    const std::size_t n_rows = raw.cells.size();
    const std::size_t label_index = resolve_label(raw, label);

    std::vector<ColumnMeta> metas(n_cols);
    std::vector<double> values(n_rows * n_cols);

    for (std::size_t c = 0; c < n_cols; ++c) {
        const auto& decl = raw.columns[c];
        auto& meta = metas[c];
        meta.name = decl.name;

        for (std::size_t r = 0; r < n_rows; ++r)
            if (is_missing(raw.cells[r][c]))
                throw ParseError("missing value", raw.lines[r], c + 1);

        bool numeric = decl.declared_numeric;
        if (!numeric && decl.declared_levels.empty()) {
            numeric = std::all_of(raw.cells.begin(), raw.cells.end(), [&](const auto& row) {
                return parse_double(row[c]).has_value();
            });
        }
        if (numeric) {
            meta.kind = ColumnKind::numeric;
            for (std::size_t r = 0; r < n_rows; ++r) {
                auto v = parse_double(raw.cells[r][c]);
                if (!v) throw ParseError("unparseable numeric cell '" + raw.cells[r][c] + "'",
                                         raw.lines[r], c + 1);
                values[r * n_cols + c] = *v;
            }
            continue;
        }

        meta.kind = ColumnKind::factor;
        if (!decl.declared_levels.empty()) {
            meta.factor_levels = decl.declared_levels;
        } else {
            for (const auto& row : raw.cells) meta.factor_levels.emplace_back(trim(row[c]));
        }
        std::sort(meta.factor_levels.begin(), meta.factor_levels.end());
        meta.factor_levels.erase(std::unique(meta.factor_levels.begin(), meta.factor_levels.end()),
                                 meta.factor_levels.end());
        std::map<std::string, int, std::less<>> codes;
        for (std::size_t i = 0; i < meta.factor_levels.size(); ++i) {
            meta.level_codes.push_back(static_cast<int>(i) + 1);
            codes.emplace(meta.factor_levels[i], static_cast<int>(i) + 1);
        }
        for (std::size_t r = 0; r < n_rows; ++r) {
            auto it = codes.find(trim(raw.cells[r][c]));
            if (it == codes.end())
                throw ParseError("value '" + raw.cells[r][c] + "' is not a declared level",
                                 raw.lines[r], c + 1);
            values[r * n_cols + c] = it->second;
        }
    }
    return DataTable(n_rows, std::move(metas), std::move(values), label_index);
}

RawTable read_csv_raw(std::string_view text) {
    auto records = parse_csv(text);
    if (records.empty()) throw ParseError("empty file", 1);
    RawTable raw;
    for (const auto& name : records.front().fields)
        raw.columns.push_back(RawColumn{std::string(trim(name)), {}, false});
    for (std::size_t i = 1; i < records.size(); ++i) {
        auto& rec = records[i];
        if (rec.fields.size() != raw.columns.size())
            throw ParseError("ragged row: expected " + std::to_string(raw.columns.size()) +
                                 " fields, found " + std::to_string(rec.fields.size()),
                             rec.line);
        raw.cells.push_back(std::move(rec.fields));
        raw.lines.push_back(rec.line);
    }
    return raw;
}

// Splits an ARFF data line or level list on commas, honouring '...' and "..."
// quoting with backslash escapes.
std::vector<std::string> split_arff(std::string_view text, std::size_t line) {
    std::vector<std::string> out;
    std::string field;
    char quote = 0;
    bool quoted_field = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quote) {
            if (c == '\\' && i + 1 < text.size()) {
                field.push_back(text[++i]);
            } else if (c == quote) {
                quote = 0;
            } else {
                field.push_back(c);
            }
        } else if (c == '\'' || c == '"') {
            quote = c;
            quoted_field = true;
        } else if (c == ',') {
            out.push_back(quoted_field ? field : std::string(trim(field)));
            field.clear();
            quoted_field = false;
        } else {
            field.push_back(c);
        }
    }
    if (quote) throw ParseError("unterminated quote", line);
    out.push_back(quoted_field ? field : std::string(trim(field)));
    return out;
}

// Reads an attribute name that may be quoted; advances pos past it.
std::string read_name(std::string_view text, std::size_t& pos, std::size_t line) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) throw ParseError("missing attribute name", line);
    if (text[pos] == '\'' || text[pos] == '"') {
        const char q = text[pos++];
        const auto end = text.find(q, pos);
        if (end == std::string_view::npos) throw ParseError("unterminated attribute name", line);
        std::string name(text.substr(pos, end - pos));
        pos = end + 1;
        return name;
    }
    const auto start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    return std::string(text.substr(start, pos - start));
}

RawTable read_arff_raw(std::string_view text) {
    RawTable raw;
    bool in_data = false;
    std::size_t line_no = 0;
    std::size_t start = 0;
    bool any_content = false;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = trim(text.substr(start, end - start));
        ++line_no;
        start = end + 1;
        if (line.empty() || line.front() == '%') {
            if (end == text.size()) break;
            continue;
        }
        any_content = true;
        if (!in_data) {
            const auto head = lower(line.substr(0, line.find_first_of(" \t")));
            if (head == "@relation") continue;
            if (head == "@data") {
                in_data = true;
                continue;
            }
            if (head != "@attribute") throw ParseError("unexpected header line", line_no);
            std::size_t pos = std::string_view("@attribute").size();
            RawColumn col;
            col.name = read_name(line, pos, line_no);
            const auto type = trim(line.substr(pos));
            if (!type.empty() && type.front() == '{') {
                const auto close = type.rfind('}');
                if (close == std::string_view::npos) throw ParseError("unterminated level list", line_no);
                col.declared_levels = split_arff(type.substr(1, close - 1), line_no);
                if (col.declared_levels.empty() ||
                    (col.declared_levels.size() == 1 && col.declared_levels[0].empty()))
                    throw ParseError("nominal attribute without levels", line_no);
                const bool all_numeric =
                    std::all_of(col.declared_levels.begin(), col.declared_levels.end(),
                                [](const auto& l) { return parse_double(l).has_value(); });
                if (all_numeric) {
                    col.declared_levels.clear();
                    col.declared_numeric = true;
                }
            } else {
                const auto kind = lower(type.substr(0, type.find_first_of(" \t")));
                if (kind == "numeric" || kind == "real" || kind == "integer") {
                    col.declared_numeric = true;
                } else if (kind != "string") {
                    throw ParseError("unsupported attribute type '" + std::string(type) + "'", line_no);
                }
            }
            raw.columns.push_back(std::move(col));
            continue;
        }
        std::vector<std::string> fields;
        if (line.front() == '{') {
            // Sparse row: {index value, ...}; absent cells are 0.
            const auto close = line.rfind('}');
            if (close == std::string_view::npos) throw ParseError("unterminated sparse row", line_no);
            fields.assign(raw.columns.size(), "0");
            const auto body = trim(line.substr(1, close - 1));
            if (!body.empty()) {
                for (const auto& entry : split_arff(body, line_no)) {
                    const auto sp = entry.find_first_of(" \t");
                    if (sp == std::string::npos) throw ParseError("malformed sparse entry", line_no);
                    auto idx = parse_double(entry.substr(0, sp));
                    if (!idx || *idx < 0 || *idx >= static_cast<double>(raw.columns.size()))
                        throw ParseError("sparse index out of range", line_no);
                    auto value = std::string(trim(std::string_view(entry).substr(sp)));
                    if (value.size() >= 2 && (value.front() == '\'' || value.front() == '"'))
                        value = value.substr(1, value.size() - 2);
                    fields[static_cast<std::size_t>(*idx)] = value;
                }
            }
        } else {
            fields = split_arff(line, line_no);
        }
        if (fields.size() != raw.columns.size())
            throw ParseError("ragged row: expected " + std::to_string(raw.columns.size()) +
                                 " fields, found " + std::to_string(fields.size()),
                             line_no);
        raw.cells.push_back(std::move(fields));
        raw.lines.push_back(line_no);
        if (end == text.size()) break;
    }
    if (!any_content) throw ParseError("empty file", 1);
    if (raw.columns.empty()) throw ParseError("no @attribute declarations", 1);
    if (!in_data) throw ParseError("missing @data section", line_no);
    return raw;
}

}  // namespace

TableFormat parse_table_format(std::string_view name) {
    const auto l = lower(name);
    if (l == "csv") return TableFormat::csv;
    if (l == "arff") return TableFormat::arff;
    throw std::invalid_argument("unknown table format '" + std::string(name) + "'");
}

TableFormat format_from_path(const std::string& path) {
    const auto dot = path.rfind('.');
    if (dot != std::string::npos && lower(path.substr(dot)) == ".arff") return TableFormat::arff;
    return TableFormat::csv;
}

DataTable parse_table(std::string_view text, TableFormat format, const LabelSelector& label) {
    if (trim(text).empty()) throw ParseError("empty file", 1);
    const auto raw = format == TableFormat::csv ? read_csv_raw(text) : read_arff_raw(text);
    return build_table(raw, label);
}

DataTable load_table(const std::string& path, TableFormat format, const LabelSelector& label) {
    auto table = parse_table(read_file(path), format, label);
    const auto slash = path.find_last_of('/');
    auto base = slash == std::string::npos ? path : path.substr(slash + 1);
    table.name = base.substr(0, base.rfind('.'));
    return table;
}

std::string write_csv(const DataTable& table) {
    std::string out;
    std::vector<std::string> fields;
    for (const auto& meta : table.columns()) fields.push_back(meta.name);
    out += join_csv(fields) + "\n";
    for (std::size_t r = 0; r < table.rows(); ++r) {
        fields.clear();
        for (std::size_t c = 0; c < table.cols(); ++c) {
            const auto& meta = table.column(c);
            fields.push_back(meta.kind == ColumnKind::factor ? meta.decode(table.at(r, c))
                                                             : format_double(table.at(r, c)));
        }
        out += join_csv(fields) + "\n";
    }
    return out;
}

}  // namespace dltune
