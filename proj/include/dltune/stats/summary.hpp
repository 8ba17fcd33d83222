#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dltune/search/trial_log.hpp"

namespace dltune {

struct BoxSummary {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

/// Linear interpolation between order statistics (type 7): h = (n - 1) p.
/// `sorted` must be ascending and non-empty.
double quantile_type7(const std::vector<double>& sorted, double p);

BoxSummary box_summary(std::vector<double> values);

enum class AccuracyStream { validation, test };

std::string to_string(AccuracyStream stream);
AccuracyStream parse_accuracy_stream(const std::string& name);

struct GroupStat {
    std::vector<std::string> key;  // one entry per group-by key
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation, 0 for a single value
    std::size_t count = 0;
};

/// Group-by keys: dataset, model, strategy, normalized, status. Rows are
/// ordered by key.
std::vector<GroupStat> mean_accuracy(const std::vector<TrialRecord>& trials, const std::vector<std::string>& keys,
                                     AccuracyStream stream = AccuracyStream::test);

/// Timing-table row label: "FFNN" for a single
/// training without search, "FFNN-grid search", "FFNN-random search", ...
std::string method_label(const std::string& model, const std::string& strategy);

struct TimingRow {
    std::string method;
    std::string model;
    std::string strategy;
    std::size_t runs = 0;    // (dataset, normalization) cells averaged over
    std::size_t trials = 0;
    double mean_seconds = 0.0;
};

/// For every (model, strategy): total wall time of each (dataset,
/// normalization) run, averaged over runs. Ordered by model, then
/// none < grid < random < nelder_mead < lr_sweep.
std::vector<TimingRow> timing_table(const std::vector<TrialRecord>& trials);

/// Descending accuracy, ties by dataset name.
std::vector<std::pair<std::string, double>> ranking_table(std::vector<std::pair<std::string, double>> results);

}  // namespace dltune
