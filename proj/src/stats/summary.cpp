#include "dltune/stats/summary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace dltune {

double quantile_type7(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BoxSummary box_summary(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("box summary of an empty sample");
    std::sort(values.begin(), values.end());
    BoxSummary b;
    b.min = values.front();
    b.max = values.back();
    b.q1 = quantile_type7(values, 0.25);
    b.median = quantile_type7(values, 0.5);
    b.q3 = quantile_type7(values, 0.75);
    double sum = 0.0;
    for (double v : values) sum += v;
    b.mean = sum / static_cast<double>(values.size());
    return b;
}

std::string to_string(AccuracyStream stream) { return stream == AccuracyStream::test ? "test" : "validation"; }

AccuracyStream parse_accuracy_stream(const std::string& name) {
    if (name == "test") return AccuracyStream::test;
    if (name == "validation") return AccuracyStream::validation;
    throw std::invalid_argument("accuracy stream must be 'test' or 'validation'");
}

namespace {

std::string key_value(const TrialRecord& t, const std::string& key) {
    if (key == "dataset") return t.dataset;
    if (key == "model") return t.model;
    if (key == "strategy") return t.strategy;
    if (key == "normalized") return t.normalized ? "true" : "false";
    if (key == "status") return to_string(t.result.status);
    throw std::invalid_argument("unknown group-by key '" + key + "'");
}

int strategy_rank(const std::string& s) {
    try {
        return static_cast<int>(parse_search_strategy(s));
    } catch (const std::invalid_argument&) {
        return 100;
    }
}

}  // namespace

std::vector<GroupStat> mean_accuracy(const std::vector<TrialRecord>& trials, const std::vector<std::string>& keys,
                                     AccuracyStream stream) {
    if (trials.empty()) throw std::invalid_argument("no trials to aggregate");
    std::map<std::vector<std::string>, std::vector<double>> groups;
    for (const auto& t : trials) {
        std::vector<std::string> key;
        for (const auto& k : keys) key.push_back(key_value(t, k));
        groups[key].push_back(stream == AccuracyStream::test ? t.result.test_accuracy : t.result.validation_accuracy);
    }
    std::vector<GroupStat> out;
    for (const auto& [key, values] : groups) {
        GroupStat g;
        g.key = key;
        g.count = values.size();
        double sum = 0.0;
        for (double v : values) sum += v;
        g.mean = sum / static_cast<double>(values.size());
        if (values.size() > 1) {
            double ss = 0.0;
            for (double v : values) ss += (v - g.mean) * (v - g.mean);
            g.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
        }
        out.push_back(std::move(g));
    }
    return out;
}

std::string method_label(const std::string& model, const std::string& strategy) {
    if (strategy == "none") return model;
    if (strategy == "grid") return model + "-grid search";
    if (strategy == "random") return model + "-random search";
    if (strategy == "nelder_mead") return model + "-Nelder-Mead search";
    if (strategy == "lr_sweep") return model + "-learning-rate sweep";
    return model + "-" + strategy;
}

std::vector<TimingRow> timing_table(const std::vector<TrialRecord>& trials) {
    // (model, strategy) -> (dataset, normalized) -> (seconds, trials)
    std::map<std::pair<std::string, std::string>, std::map<std::pair<std::string, bool>, std::pair<double, std::size_t>>>
        cells;
    for (const auto& t : trials) {
        auto& run = cells[{t.model, t.strategy}][{t.dataset, t.normalized}];
        run.first += t.result.wall_time;
        run.second += 1;
    }
    std::vector<TimingRow> out;
    for (const auto& [ms, runs] : cells) {
        TimingRow row;
        row.model = ms.first;
        row.strategy = ms.second;
        row.method = method_label(row.model, row.strategy);
        row.runs = runs.size();
        double total = 0.0;
        for (const auto& [_, run] : runs) {
            total += run.first;
            row.trials += run.second;
        }
        row.mean_seconds = total / static_cast<double>(row.runs);
        out.push_back(std::move(row));
    }
    std::stable_sort(out.begin(), out.end(), [](const TimingRow& a, const TimingRow& b) {
        if (a.model != b.model) return a.model < b.model;
        const int ra = strategy_rank(a.strategy), rb = strategy_rank(b.strategy);
        if (ra != rb) return ra < rb;
        return a.strategy < b.strategy;
    });
    return out;
}

std::vector<std::pair<std::string, double>> ranking_table(std::vector<std::pair<std::string, double>> results) {
    std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return results;
}

}  // namespace dltune
