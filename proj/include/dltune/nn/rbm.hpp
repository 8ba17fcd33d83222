#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dltune/data/table.hpp"
#include "dltune/nn/config.hpp"
#include "dltune/nn/ffnn.hpp"
#include "dltune/nn/matrix.hpp"
#include "dltune/splits/splits.hpp"

namespace dltune {

/// Bernoulli-Bernoulli restricted Boltzmann machine. weights is visible x hidden.
struct Rbm {
    Matrix weights;
    std::vector<double> visible_bias;
    std::vector<double> hidden_bias;

    static Rbm random(std::size_t visible, std::size_t hidden, std::uint64_t seed);

    std::size_t visible_dim() const { return weights.rows(); }
    std::size_t hidden_dim() const { return weights.cols(); }

    /// P(h = 1 | v) for each row of v.
    Matrix hidden_probabilities(const Matrix& visible) const;
    /// P(v = 1 | h) for each row of h.
    Matrix visible_probabilities(const Matrix& hidden) const;
};

struct CdStep {
    Rbm rbm;
    double reconstruction_error = 0.0;  // mean squared error of the one-step reconstruction
};

/// One contrastive-divergence step: positive statistics from the batch,
/// negative statistics from one Gibbs reconstruction (sampled hidden units,
/// visible and hidden probabilities on the way back). Every parameter moves
/// by learning_rate * (<v h>_data - <v h>_recon) / batch. Throws if a batch
/// value lies outside [0, 1].
CdStep rbm_cd1_update(const Rbm& rbm, const Matrix& batch, double learning_rate, std::uint64_t seed);

/// RBMs stacked bottom-up; the hidden layer of RBM k is the visible layer of
/// RBM k+1. The top pair acts as the undirected associative memory; the
/// classifier reads the top hidden probabilities directly.
struct RbmStack {
    std::vector<Rbm> layers;

    void validate() const;
    /// Hidden probabilities of the top RBM.
    Matrix transform(const Matrix& visible) const;
};

struct DbnPretrainResult {
    RbmStack stack;
    std::vector<std::vector<double>> reconstruction_traces;  // epoch-mean error per layer
};

/// Greedy layerwise CD-1, one RBM per hidden_dims entry. Layer k+1 trains on
/// layer k's hidden probabilities. Input must lie in [0, 1].
DbnPretrainResult dbn_pretrain(const Matrix& x, const TrainConfig& config);
DbnPretrainResult dbn_pretrain(const DataTable& data, const SplitPlan& plan, const TrainConfig& config);

/// Sigmoid hidden layers initialized from the RBMs, topped by a softmax head,
/// fine-tuned by backpropagation on plan.train.
TrainedClassifier dbn_classify(const RbmStack& stack, const DataTable& data, const SplitPlan& plan,
                               const TrainConfig& config);

}  // namespace dltune
