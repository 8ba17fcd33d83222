#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dltune {

enum class SplitScheme { holdout_70_30, three_way_70_15_15, repeated_cv };

std::string to_string(SplitScheme scheme);

/// One train/validation/test partition of instance indices 0..n-1.
struct SplitPlan {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
    std::uint64_t seed = 0;
    SplitScheme scheme = SplitScheme::holdout_70_30;
    std::size_t folds = 0;    // repeated_cv only
    std::size_t repeats = 0;  // repeated_cv only
    std::size_t repeat = 0;   // position of this plan, repeated_cv only
    std::size_t fold = 0;

    std::size_t size() const { return train.size() + validation.size() + test.size(); }
};

/// Optional class labels (one per instance) for the stratified variants.
/// Stratification is off unless labels are supplied.
struct SplitOptions {
    std::optional<std::span<const double>> stratify_labels;
};

/// Seeded shuffle, first floor(0.7 n) to train, the rest to test.
SplitPlan holdout(std::size_t n, std::uint64_t seed, const SplitOptions& options = {});

/// floor(0.7 n) train; the remainder split between validation and test with
/// validation taking the odd element.
SplitPlan three_way(std::size_t n, std::uint64_t seed, const SplitOptions& options = {});

/// `repeats` independent shuffles, each cut into `folds` near-equal folds
/// (earlier folds take the remainder). Plans are ordered repeat-major; each
/// fold is the test part once, validation is empty.
std::vector<SplitPlan> repeated_cv(std::size_t n, std::size_t folds, std::size_t repeats,
                                   std::uint64_t seed, const SplitOptions& options = {});

/// Cross-validation restricted to outer.train. Indices stay in the original
/// 0..n-1 numbering.
std::vector<SplitPlan> repeated_cv_within(const SplitPlan& outer, std::size_t folds,
                                          std::size_t repeats, std::uint64_t seed);

/// {"scheme", "seed", "train", "validation", "test"[, "folds", "repeats", "repeat", "fold"]}
std::string plan_to_json(const SplitPlan& plan);
SplitPlan plan_from_json(const std::string& text);

/// Throws std::logic_error unless the parts are disjoint and cover 0..n-1.
void check_partition(const SplitPlan& plan, std::size_t n);

}  // namespace dltune
