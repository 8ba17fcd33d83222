#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dltune/data/table.hpp"
#include "dltune/nn/activation.hpp"
#include "dltune/nn/config.hpp"
#include "dltune/nn/matrix.hpp"
#include "dltune/nn/metrics.hpp"
#include "dltune/splits/splits.hpp"

namespace dltune {

/// Fully connected layer computing act(x W + b); weights are in x out.
struct DenseLayer {
    Matrix weights;
    std::vector<double> bias;
    Activation activation = Activation::sigmoid;

    std::size_t input_dim() const { return weights.rows(); }
    std::size_t output_dim() const { return weights.cols(); }
};

/// Hidden layers followed by a softmax head with one output per class.
struct FeedForwardModel {
    std::vector<DenseLayer> hidden;
    DenseLayer head;  // activation ignored, softmax applied
    std::vector<double> classes;

    std::size_t input_dim() const;
    std::size_t n_classes() const { return head.output_dim(); }
    /// Throws std::invalid_argument if consecutive shapes disagree or a
    /// parameter is not finite.
    void validate() const;
};

FeedForwardModel make_feedforward(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims,
                                  std::vector<double> classes, Activation activation,
                                  std::uint64_t seed);

struct TrainedClassifier {
    FeedForwardModel model;
    std::vector<double> loss_trace;  // mean cross-entropy per epoch
};

/// Mini-batch SGD with softmax cross-entropy on plan.train. Classes are taken
/// from the whole label column so every split shares one output layout.
TrainedClassifier ffnn_train(const DataTable& data, const SplitPlan& plan, const TrainConfig& config);

Prediction ffnn_predict(const FeedForwardModel& model, const Matrix& features);
Prediction ffnn_predict(const FeedForwardModel& model, const DataTable& data,
                        std::span<const std::size_t> rows);

/// Mean cross-entropy and its exact gradients, dropout off. Layer order is
/// hidden[0..], then the head.
struct FeedForwardGradients {
    double loss = 0.0;
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
};

FeedForwardGradients ffnn_gradients(const FeedForwardModel& model, const Matrix& features,
                                    std::span<const int> targets);
double ffnn_loss(const FeedForwardModel& model, const Matrix& features, std::span<const int> targets);

/// Shared SGD loop used by the FFNN, SAE and DBN classifiers. Applies
/// inverted dropout to inputs (visible) and hidden activations during
/// training only. Returns the per-epoch loss trace.
std::vector<double> train_feedforward(FeedForwardModel& model, const Matrix& features,
                                      std::span<const int> targets, const TrainConfig& config);

}  // namespace dltune
