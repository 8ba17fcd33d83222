#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dltune {

/// Error raised while reading a text format, carrying a 1-based location.
/// column is 0 when the problem concerns a whole row.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t column = 0);

    std::size_t row() const { return row_; }
    std::size_t column() const { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

struct CsvRecord {
    std::size_t line = 0;  // 1-based line where the record starts
    std::vector<std::string> fields;
};

/// Splits RFC-4180 style text into records. Quoted fields may contain
/// separators, doubled quotes and line breaks. Blank lines are skipped.
std::vector<CsvRecord> parse_csv(std::string_view text, char separator = ',');

/// Quotes a field only when it needs it.
std::string csv_escape(std::string_view field);

std::string join_csv(const std::vector<std::string>& fields);

/// Shortest text that parses back to exactly the same double.
std::string format_double(double value);

/// Strict full-token parse; nullopt for anything that is not a finite or
/// infinite decimal number.
std::optional<double> parse_double(std::string_view token);

std::string_view trim(std::string_view text);

std::string read_file(const std::string& path);

}  // namespace dltune
