#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dltune/experiment/config.hpp"

namespace dltune {

enum ExitCode : int { exit_ok = 0, exit_partial_failure = 1, exit_config_error = 2 };

/// Command-line values that take precedence over the config file.
struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> jobs;
    std::optional<std::string> strategy;
    std::optional<std::string> output_dir;
};

/// Throws ConfigError for an unknown strategy name.
void apply_overrides(ExperimentConfig& config, const RunOverrides& overrides);

/// hash(master seed, dataset name, model, trial index)
std::uint64_t trial_seed(std::uint64_t master, const std::string& dataset, const std::string& model,
                         std::size_t index);

/// Writes profiles/<dataset>.json and sparsity.csv
/// (dataset,sparsity,sparsity_without_label,n_instances,n_features,class_uniformity).
/// Unloadable datasets are reported on `log` and give exit_partial_failure.
int cmd_profile(const ExperimentConfig& config, std::ostream& log);

/// Three-way split per dataset, then every strategy for every model and
/// normalization variant. Writes trials.csv, trials.times.csv,
/// splits/<dataset>.json and the report files of write_report.
int cmd_tune(const ExperimentConfig& config, std::ostream& log);

/// Learning-rate curve per dataset, normalization variant and model from
/// repeated cross-validation, plus a Kruskal-Wallis test across the models'
/// curves. Writes <dataset>[.normalized].<MODEL>.curve.csv and
/// kruskal_wallis.json.
int cmd_sweep_lr(const ExperimentConfig& config, std::ostream& log);

/// Merges trial logs (and their wall-time sidecars) into out_dir/trials.csv
/// and rewrites the report files from them.
int cmd_report(const std::vector<std::string>& logs, const std::string& out_dir, const ReportOptions& options,
               std::ostream& log);

}  // namespace dltune
