#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dltune/data/table.hpp"
#include "dltune/nn/config.hpp"
#include "dltune/search/search.hpp"
#include "dltune/splits/splits.hpp"

namespace dltune {

struct FitScore {
    double validation_accuracy = 0.0;  // 0 when the plan has no validation part
    double test_accuracy = 0.0;
    std::vector<double> loss_trace;
};

/// Trains `kind` on plan.train and scores the validation and test parts.
/// SAE and DBN pretrain on plan.train and then fine-tune with the same config.
FitScore fit_and_score(ModelKind kind, const DataTable& data, const SplitPlan& plan, const TrainConfig& config);

/// One timed trial. Divergence is recorded as status diverged, any other
/// training error (an inapplicable setting, a batch larger than the training
/// part, unscaled DBN input) as failed; both score 0.
TrialResult run_trial(ModelKind kind, const DataTable& data, const SplitPlan& plan, const TrainConfig& base,
                      const Assignment& assignment, std::uint64_t seed);

}  // namespace dltune
