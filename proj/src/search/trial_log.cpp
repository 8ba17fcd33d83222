#include "dltune/search/trial_log.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>

#include "dltune/common/csv.hpp"

namespace dltune {
namespace {

const std::vector<std::string> kLeading{"trial", "strategy", "dataset", "model", "normalized"};
const std::vector<std::string> kTrailing{"validation_accuracy", "test_accuracy", "epochs_run", "status", "seed",
                                         "message"};

template <typename T>
T parse_unsigned(const std::string& s, std::size_t line, std::size_t column) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw ParseError("expected an unsigned integer, got '" + s + "'", line, column);
    return v;
}

double parse_number(const std::string& s, std::size_t line, std::size_t column) {
    auto v = parse_double(s);
    if (!v) throw ParseError("expected a number, got '" + s + "'", line, column);
    return *v;
}

}  // namespace

const std::vector<std::string>& trial_log_columns() {
    static const std::vector<std::string> columns = [] {
        std::vector<std::string> c = kLeading;
        for (const auto& h : known_hyperparameters()) c.push_back(h);
        c.insert(c.end(), kTrailing.begin(), kTrailing.end());
        return c;
    }();
    return columns;
}

std::string format_trial_log(const std::vector<TrialRecord>& records) {
    std::string out = join_csv(trial_log_columns()) + "\n";
    const auto& hyper = known_hyperparameters();
    for (const auto& r : records) {
        for (const auto& [name, value] : r.result.assignment)
            if (std::find(hyper.begin(), hyper.end(), name) == hyper.end())
                throw std::invalid_argument("trial log cannot store hyperparameter '" + name + "'");
        std::vector<std::string> f{std::to_string(r.result.index), r.strategy, r.dataset, r.model,
                                   r.normalized ? "true" : "false"};
        for (const auto& h : hyper) {
            auto v = find_value(r.result.assignment, h);
            f.push_back(v ? format_double(*v) : "");
        }
        f.push_back(format_double(r.result.validation_accuracy));
        f.push_back(format_double(r.result.test_accuracy));
        f.push_back(std::to_string(r.result.epochs_run));
        f.push_back(to_string(r.result.status));
        f.push_back(std::to_string(r.seed));
        f.push_back(r.result.message);
        out += join_csv(f) + "\n";
    }
    return out;
}

std::vector<TrialRecord> parse_trial_log(const std::string& text) {
    const auto rows = parse_csv(text);
    if (rows.empty()) throw ParseError("trial log is empty", 1);
    const auto& expected = trial_log_columns();
    const auto& header = rows.front().fields;
    for (std::size_t i = 0; i < std::max(header.size(), expected.size()); ++i) {
        if (i >= header.size()) throw ParseError("trial log is missing column '" + expected[i] + "'", 1, i + 1);
        if (i >= expected.size()) throw ParseError("unexpected column '" + header[i] + "'", 1, i + 1);
        if (header[i] != expected[i])
            throw ParseError("column " + std::to_string(i + 1) + " is '" + header[i] + "', expected '" + expected[i] + "'",
                             1, i + 1);
    }

    const auto& hyper = known_hyperparameters();
    const std::size_t first_hyper = kLeading.size();
    const std::size_t first_trailing = first_hyper + hyper.size();
    std::vector<TrialRecord> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& rec = rows[r];
        const auto& f = rec.fields;
        if (f.size() != expected.size())
            throw ParseError("row has " + std::to_string(f.size()) + " fields, expected " + std::to_string(expected.size()),
                             rec.line);
        TrialRecord t;
        t.result.index = parse_unsigned<std::size_t>(f[0], rec.line, 1);
        t.strategy = f[1];
        t.dataset = f[2];
        t.model = f[3];
        if (f[4] == "true") t.normalized = true;
        else if (f[4] != "false") throw ParseError("normalized must be true or false", rec.line, 5);
        for (std::size_t h = 0; h < hyper.size(); ++h) {
            const auto& cell = f[first_hyper + h];
            if (!cell.empty()) t.result.assignment.emplace_back(hyper[h], parse_number(cell, rec.line, first_hyper + h + 1));
        }
        std::size_t c = first_trailing;
        t.result.validation_accuracy = parse_number(f[c], rec.line, c + 1);
        t.result.test_accuracy = parse_number(f[c + 1], rec.line, c + 2);
        t.result.epochs_run = parse_unsigned<std::size_t>(f[c + 2], rec.line, c + 3);
        try {
            t.result.status = parse_trial_status(f[c + 3]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), rec.line, c + 4);
        }
        t.seed = parse_unsigned<std::uint64_t>(f[c + 4], rec.line, c + 5);
        t.result.message = f[c + 5];
        out.push_back(std::move(t));
    }
    return out;
}

std::string format_trial_times(const std::vector<TrialRecord>& records) {
    std::string out = "row,wall_time\n";
    for (std::size_t i = 0; i < records.size(); ++i)
        out += std::to_string(i) + "," + format_double(records[i].result.wall_time) + "\n";
    return out;
}

void attach_trial_times(std::vector<TrialRecord>& records, const std::string& text) {
    const auto rows = parse_csv(text);
    if (rows.empty() || rows.front().fields != std::vector<std::string>{"row", "wall_time"})
        throw ParseError("wall-time sidecar needs the header row,wall_time", 1);
    if (rows.size() - 1 != records.size())
        throw ParseError("wall-time sidecar has " + std::to_string(rows.size() - 1) + " rows for " +
                             std::to_string(records.size()) + " trials",
                         rows.back().line);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i].fields;
        if (f.size() != 2) throw ParseError("expected 2 fields", rows[i].line);
        if (parse_unsigned<std::size_t>(f[0], rows[i].line, 1) != i - 1) throw ParseError("rows out of order", rows[i].line, 1);
        const double t = parse_number(f[1], rows[i].line, 2);
        if (!(t >= 0.0)) throw ParseError("wall time must be non-negative", rows[i].line, 2);
        records[i - 1].result.wall_time = t;
    }
}

std::string trial_times_path(const std::string& log_path) {
    std::filesystem::path p(log_path);
    p.replace_extension(".times.csv");
    return p.string();
}

std::vector<TrialRecord> read_trial_log(const std::string& path) {
    auto records = parse_trial_log(read_file(path));
    const auto sidecar = trial_times_path(path);
    if (std::filesystem::exists(sidecar)) attach_trial_times(records, read_file(sidecar));
    return records;
}

}  // namespace dltune
