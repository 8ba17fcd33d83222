#include "dltune/experiment/evaluate.hpp"

#include <chrono>
#include <exception>

#include "dltune/nn/autoencoder.hpp"
#include "dltune/nn/ffnn.hpp"
#include "dltune/nn/metrics.hpp"
#include "dltune/nn/rbm.hpp"
#include "dltune/nn/rnn.hpp"
#include "dltune/nn/tabular.hpp"
#include "dltune/search/space.hpp"

namespace dltune {
namespace {

double score(const Prediction& p, const DataTable& data, const std::vector<std::size_t>& rows) {
    return accuracy(p.labels, label_values(data, rows));
}

template <typename Predict>
void score_parts(FitScore& out, const DataTable& data, const SplitPlan& plan, Predict&& predict) {
    if (!plan.validation.empty()) out.validation_accuracy = score(predict(plan.validation), data, plan.validation);
    if (!plan.test.empty()) out.test_accuracy = score(predict(plan.test), data, plan.test);
}

}  // namespace

FitScore fit_and_score(ModelKind kind, const DataTable& data, const SplitPlan& plan, const TrainConfig& config) {
    FitScore out;
    if (kind == ModelKind::rnn) {
        auto trained = rnn_train(data, plan, config);
        out.loss_trace = std::move(trained.loss_trace);
        score_parts(out, data, plan, [&](const std::vector<std::size_t>& rows) { return rnn_predict(trained.model, data, rows); });
        return out;
    }
    TrainedClassifier trained;
    switch (kind) {
        case ModelKind::ffnn: trained = ffnn_train(data, plan, config); break;
        case ModelKind::sae: trained = sae_finetune_classify(sae_pretrain(data, plan, config).stack, data, plan, config); break;
        case ModelKind::dbn: trained = dbn_classify(dbn_pretrain(data, plan, config).stack, data, plan, config); break;
        case ModelKind::rnn: break;
    }
    out.loss_trace = std::move(trained.loss_trace);
    score_parts(out, data, plan, [&](const std::vector<std::size_t>& rows) { return ffnn_predict(trained.model, data, rows); });
    return out;
}

TrialResult run_trial(ModelKind kind, const DataTable& data, const SplitPlan& plan, const TrainConfig& base,
                      const Assignment& assignment, std::uint64_t seed) {
    TrialResult r;
    r.assignment = assignment;
    const auto start = std::chrono::steady_clock::now();
    try {
        TrainConfig config = apply_assignment(base, assignment);
        config.seed = seed;
        auto fit = fit_and_score(kind, data, plan, config);
        r.validation_accuracy = fit.validation_accuracy;
        r.test_accuracy = fit.test_accuracy;
        r.epochs_run = fit.loss_trace.size();
        r.loss_trace = std::move(fit.loss_trace);
    } catch (const DivergenceError& e) {
        r.status = TrialStatus::diverged;
        r.epochs_run = e.epoch();
        r.message = e.what();
    } catch (const std::exception& e) {
        r.status = TrialStatus::failed;
        r.message = e.what();
    }
    if (r.status != TrialStatus::ok) {
        r.validation_accuracy = 0.0;
        r.test_accuracy = 0.0;
    }
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace dltune
