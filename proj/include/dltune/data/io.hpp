#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>

#include "dltune/data/table.hpp"

namespace dltune {

enum class TableFormat { csv, arff };

/// Label column chosen by header name or by 0-based position.
using LabelSelector = std::variant<std::string, std::size_t>;

TableFormat parse_table_format(std::string_view name);
/// Guesses from the file extension (.arff, otherwise csv).
TableFormat format_from_path(const std::string& path);

/// Parses CSV (header row required) or ARFF text into a DataTable.
///
/// Columns whose tokens all parse as numbers are numeric, anything else is a
/// factor with levels sorted and coded 1..CF. ARFF nominal attributes are
/// factors unless every declared level is itself a number. Missing cells
/// ("", "?", "NA", "nan") are rejected. Errors carry row/column locations
/// through ParseError.
DataTable parse_table(std::string_view text, TableFormat format, const LabelSelector& label);

DataTable load_table(const std::string& path, TableFormat format, const LabelSelector& label);

/// Writes a CSV that load_table reads back to an identical table. Factor
/// cells are written as their level tokens.
std::string write_csv(const DataTable& table);

}  // namespace dltune
