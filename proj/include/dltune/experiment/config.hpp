#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dltune/data/io.hpp"
#include "dltune/data/preprocess.hpp"
#include "dltune/nn/config.hpp"
#include "dltune/search/search.hpp"
#include "dltune/search/space.hpp"
#include "dltune/splits/splits.hpp"
#include "dltune/stats/report.hpp"

namespace dltune {

/// Invalid or unreadable experiment configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DatasetSpec {
    std::string name;
    std::string path;  // resolved against the config file's directory
    TableFormat format = TableFormat::csv;
    LabelSelector label = std::string("class");
};

struct StrategySpec {
    SearchStrategy kind = SearchStrategy::grid;
    std::size_t n_trials = 50;   // random
    std::size_t max_evals = 50;  // nelder_mead
};

struct LrSweepSpec {
    std::vector<double> values;  // explicit grid; empty means `points` evenly spaced over [lo, hi]
    std::size_t points = 208;
    double lo = 0.005;
    double hi = 0.823;
    std::size_t folds = 10;
    std::size_t repeats = 10;

    std::vector<double> grid() const;
};

struct ExperimentConfig {
    std::string name;
    std::uint64_t seed = 0;
    std::vector<DatasetSpec> datasets;
    PreprocessOptions preprocessing;
    std::vector<bool> normalize_variants{true};  // "normalize": true, false or [false, true]
    std::vector<ModelKind> models;
    std::vector<StrategySpec> strategies;
    bool baseline = false;  // also record one training at the default configuration
    TrainConfig training;   // defaults that an assignment overrides
    std::vector<ParamAxis> space_overrides;
    std::map<ModelKind, std::vector<ParamAxis>> model_space_overrides;
    SplitScheme split_scheme = SplitScheme::three_way_70_15_15;
    std::optional<std::uint64_t> split_seed;
    bool stratify = false;
    LrSweepSpec lr_sweep;
    ReportOptions report;
    std::size_t jobs = 1;
    std::string output_dir = "out";

    /// default_space(kind) with the configured overrides applied.
    ParamSpace space_for(ModelKind kind) const;
};

/// Parses the JSON experiment file. Relative dataset paths and output_dir are
/// resolved against base_dir. Throws ConfigError.
ExperimentConfig parse_experiment_config(const std::string& text, const std::string& base_dir = ".");
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace dltune
