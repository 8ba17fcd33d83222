#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dltune/nn/activation.hpp"

namespace dltune {

enum class ModelKind { ffnn, rnn, sae, dbn };

std::string to_string(ModelKind kind);  // "FFNN", "RNN", "SAE", "DBN"
ModelKind parse_model_kind(std::string_view name);

/// Decides when training is suspended. Training always stops after
/// min(TrainConfig::epochs, max_epochs) epochs; with patience > 0 it also
/// stops once the epoch loss has failed to improve by at least
/// min_loss_delta for `patience` consecutive epochs.
struct StoppingCriterion {
    std::size_t max_epochs = std::numeric_limits<std::size_t>::max();
    double min_loss_delta = 0.0;
    std::size_t patience = 0;

    bool should_stop(const std::vector<double>& loss_trace) const;
};

/// One hyperparameter assignment.
struct TrainConfig {
    double learning_rate = 0.1;
    std::size_t batch_size = 10;
    std::size_t epochs = 10;
    std::vector<std::size_t> hidden_dims{5};
    double hidden_dropout = 0.0;
    double visible_dropout = 0.0;
    Activation activation = Activation::sigmoid;
    std::uint64_t seed = 0;
    StoppingCriterion stopping;

    /// Steps of backpropagation through time; 0 means the full sequence.
    std::size_t bptt_horizon = 0;
    /// SAE: reject levels whose code is not smaller than their input.
    bool strict_compression = false;

    std::size_t epoch_limit() const { return std::min(epochs, stopping.max_epochs); }
};

/// Throws std::invalid_argument on values outside their domains.
void validate(const TrainConfig& config);

/// Dropout applicability: hidden dropout is not available for RNN, visible
/// dropout only for DBN and SAE.
void check_applicability(ModelKind kind, const TrainConfig& config);

/// Loss became NaN or infinite.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(std::size_t epoch);
    std::size_t epoch() const { return epoch_; }

private:
    std::size_t epoch_;
};

}  // namespace dltune
