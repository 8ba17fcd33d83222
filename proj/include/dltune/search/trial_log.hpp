#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dltune/search/search.hpp"

namespace dltune {

/// One row of a trial log: a TrialResult plus the experiment cell it belongs to.
struct TrialRecord {
    std::string strategy;  // to_string(SearchStrategy)
    std::string dataset;
    std::string model;     // to_string(ModelKind)
    bool normalized = false;
    std::uint64_t seed = 0;
    TrialResult result;
};

/// trial,strategy,dataset,model,normalized,<one column per known
/// hyperparameter>,validation_accuracy,test_accuracy,epochs_run,status,seed,message
///
/// Wall time is kept out of this file so that reruns produce identical bytes;
/// it goes to the sidecar written by format_trial_times.
const std::vector<std::string>& trial_log_columns();

std::string format_trial_log(const std::vector<TrialRecord>& records);
/// Throws ParseError naming the first missing, unexpected or misplaced column,
/// or the row and column of an unreadable cell.
std::vector<TrialRecord> parse_trial_log(const std::string& text);

/// row,wall_time with one row per trial-log row.
std::string format_trial_times(const std::vector<TrialRecord>& records);
/// Copies wall times onto records; the row count must match.
void attach_trial_times(std::vector<TrialRecord>& records, const std::string& text);

/// "dir/trials.csv" -> "dir/trials.times.csv"
std::string trial_times_path(const std::string& log_path);

/// Reads a trial log and, when present, its wall-time sidecar.
std::vector<TrialRecord> read_trial_log(const std::string& path);

}  // namespace dltune
