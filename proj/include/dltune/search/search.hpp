#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "dltune/search/space.hpp"

namespace dltune {

enum class TrialStatus { ok, diverged, failed };

std::string to_string(TrialStatus status);  // "ok", "diverged", "failed"
TrialStatus parse_trial_status(std::string_view text);

struct TrialResult {
    std::size_t index = 0;  // enumeration position within the search
    Assignment assignment;
    double validation_accuracy = 0.0;
    double test_accuracy = 0.0;
    double wall_time = 0.0;  // seconds
    std::size_t epochs_run = 0;
    std::vector<double> loss_trace;
    TrialStatus status = TrialStatus::ok;
    std::string message;
};

/// Called once per assignment with its enumeration index. May run on worker
/// threads when jobs > 1.
using Evaluator = std::function<TrialResult(const Assignment&, std::size_t index)>;

struct SearchResult {
    TrialResult best;
    std::vector<TrialResult> trials;  // enumeration order
};

enum class SearchStrategy { none, grid, random, nelder_mead, lr_sweep };

std::string to_string(SearchStrategy strategy);  // "none", "grid", "random", "nelder_mead", "lr_sweep"
SearchStrategy parse_search_strategy(std::string_view name);

/// Every point of the Cartesian product, first axis varying slowest.
std::vector<Assignment> grid_assignments(const ParamSpace& space);
/// n seeded draws: uniform over the values of discrete axes, uniform real
/// (or integer) over intervals. Axes are drawn in order within each trial.
std::vector<Assignment> random_assignments(const ParamSpace& space, std::size_t n, std::uint64_t seed);

/// Evaluates the assignments with up to `jobs` threads and returns the results
/// in input order. An evaluator exception is rethrown after all workers stop
/// (the one with the lowest index wins).
std::vector<TrialResult> evaluate_all(const std::vector<Assignment>& assignments, const Evaluator& evaluate,
                                      std::size_t jobs = 1);

/// Highest validation accuracy, ties to the earliest trial.
std::size_t best_index(const std::vector<TrialResult>& trials);

SearchResult grid_search(const ParamSpace& space, const Evaluator& evaluate, std::size_t jobs = 1);
SearchResult random_search(const ParamSpace& space, std::size_t n_trials, std::uint64_t seed,
                           const Evaluator& evaluate, std::size_t jobs = 1);

/// Nelder-Mead over the axes of `space`, minimizing 1 - validation accuracy.
/// Interval axes are searched directly (clamped, integers rounded); discrete
/// axes are searched over their value index and snapped to the nearest
/// value. Starts at the axis midpoints; every objective call is one trial.
SearchResult nelder_mead_search(const ParamSpace& space, std::size_t max_evals, const Evaluator& evaluate);

/// 208 evenly spaced learning rates over [0.005, 0.823].
std::vector<double> default_lr_grid(std::size_t points = 208, double lo = 0.005, double hi = 0.823);

struct LrCurvePoint {
    double learning_rate = 0.0;
    double mean_accuracy = 0.0;
    std::vector<double> samples;  // one accuracy per CV plan
};

/// One evaluation per learning rate; `evaluate` returns the per-plan
/// accuracies for that rate.
std::vector<LrCurvePoint> lr_sweep(const std::vector<double>& grid,
                                   const std::function<std::vector<double>(double, std::size_t)>& evaluate,
                                   std::size_t jobs = 1);

struct Budget {
    std::size_t max_trials = 1;
    std::size_t volume = 1;      // V
    std::size_t iterations = 1;  // n
};

struct BudgetEstimate {
    std::size_t evaluations = 0;
    double volume_per_iteration = 0.0;  // V / n
    double relative_cost = 0.0;         // evaluations * V / n
};

/// grid: product of cardinalities; random and nelder_mead: budget.max_trials;
/// lr_sweep: size of the learning_rate axis when discrete, else max_trials;
/// none: 1.
BudgetEstimate budget_estimate(const ParamSpace& space, const Budget& budget, SearchStrategy strategy);

}  // namespace dltune
