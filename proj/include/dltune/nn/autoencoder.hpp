#pragma once

#include <cstddef>
#include <vector>

#include "dltune/data/table.hpp"
#include "dltune/nn/config.hpp"
#include "dltune/nn/ffnn.hpp"
#include "dltune/nn/matrix.hpp"
#include "dltune/splits/splits.hpp"

namespace dltune {

/// One autoencoder: code = act(x We + be), reconstruction = code Wd + bd.
struct AutoencoderLevel {
    DenseLayer encoder;
    DenseLayer decoder;  // linear

    std::size_t input_dim() const { return encoder.input_dim(); }
    std::size_t code_dim() const { return encoder.output_dim(); }
};

/// Autoencoders stacked so that level k reads the codes of level k-1.
struct AutoencoderStack {
    std::vector<AutoencoderLevel> levels;

    /// Throws std::invalid_argument when a decoder does not mirror its encoder
    /// or a level's input differs from the previous code size.
    void validate() const;
    /// Codes of the deepest level.
    Matrix encode(const Matrix& x) const;
    /// Encode through every level, then decode back down to the input space.
    Matrix reconstruct(const Matrix& x) const;
};

double reconstruction_mse(const Matrix& x, const Matrix& reconstruction);

struct SaePretrainResult {
    AutoencoderStack stack;
    std::vector<std::vector<double>> level_traces;  // reconstruction MSE per epoch, per level
};

/// Greedy layerwise training on `x`: each level learns to reconstruct its own
/// input under squared error. visible_dropout zeroes inputs (denoising),
/// hidden_dropout applies inverted dropout to codes. Zero epochs returns the
/// initialized stack.
SaePretrainResult sae_pretrain(const Matrix& x, const TrainConfig& config);
SaePretrainResult sae_pretrain(const DataTable& data, const SplitPlan& plan, const TrainConfig& config);

/// Encoders become hidden layers under a softmax head; the whole network is
/// then fine-tuned by backpropagation on plan.train.
TrainedClassifier sae_finetune_classify(const AutoencoderStack& stack, const DataTable& data,
                                        const SplitPlan& plan, const TrainConfig& config);

}  // namespace dltune
