#include "dltune/common/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace dltune {

ParseError::ParseError(const std::string& what, std::size_t row, std::size_t column)
    : std::runtime_error(column == 0
                             ? what + " (row " + std::to_string(row) + ")"
                             : what + " (row " + std::to_string(row) + ", column " +
                                   std::to_string(column) + ")"),
      row_(row),
      column_(column) {}

std::vector<CsvRecord> parse_csv(std::string_view text, char separator) {
    std::vector<CsvRecord> records;
    CsvRecord current;
    std::string field;
    std::size_t line = 1;
    bool in_quotes = false;
    bool record_has_content = false;
    current.line = 1;

    auto end_field = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        if (record_has_content) {
            end_field();
            records.push_back(std::move(current));
        }
        current = CsvRecord{};
        field.clear();
        record_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' ) {
            if (!trim(field).empty())
                throw ParseError("unexpected quote inside unquoted field", line,
                                 current.fields.size() + 1);
            field.clear();
            in_quotes = true;
            record_has_content = true;
        } else if (c == separator) {
            end_field();
            record_has_content = true;
        } else if (c == '\r') {
            // tolerated before \n
        } else if (c == '\n') {
            end_record();
            ++line;
            current.line = line;
        } else {
            if (!record_has_content) current.line = line;
            field.push_back(c);
            record_has_content = true;
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted field", current.line);
    end_record();
    return records;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string join_csv(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += csv_escape(fields[i]);
    }
    return out;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view token) {
    token = trim(token);
    if (token.empty()) return std::nullopt;
    if (token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
    return value;
}

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace dltune
