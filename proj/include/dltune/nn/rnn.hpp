#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dltune/data/table.hpp"
#include "dltune/nn/config.hpp"
#include "dltune/nn/matrix.hpp"
#include "dltune/nn/metrics.hpp"
#include "dltune/splits/splits.hpp"

namespace dltune {

/// Elman network without biases:
///   c_s = tanh(w_nn * p_s + w_in * i_s),  p_s = c_{s-1},  p_1 = 0
///   y   = w_o * c_s
/// Weights act on column vectors: w_in is hidden x input, w_nn is
/// hidden x hidden, w_o is output x hidden.
class RecurrentModel {
public:
    RecurrentModel() = default;
    /// Throws std::invalid_argument when the shapes disagree.
    RecurrentModel(Matrix w_in, Matrix w_nn, Matrix w_o, std::vector<double> classes = {});

    static RecurrentModel random(std::size_t input_dim, std::size_t hidden_dim,
                                 std::size_t output_dim, std::uint64_t seed);

    std::size_t input_dim() const { return w_in_.cols(); }
    std::size_t hidden_dim() const { return w_nn_.rows(); }
    std::size_t output_dim() const { return w_o_.rows(); }

    const Matrix& w_in() const { return w_in_; }
    const Matrix& w_nn() const { return w_nn_; }
    const Matrix& w_o() const { return w_o_; }
    Matrix& w_in() { return w_in_; }
    Matrix& w_nn() { return w_nn_; }
    Matrix& w_o() { return w_o_; }

    const std::vector<double>& classes() const { return classes_; }
    void set_classes(std::vector<double> classes) { classes_ = std::move(classes); }

private:
    Matrix w_in_;
    Matrix w_nn_;
    Matrix w_o_;
    std::vector<double> classes_;
};

/// c_s = tanh(w_nn p_s + w_in i_s)
std::vector<double> rnn_step(const RecurrentModel& model, std::span<const double> previous_state,
                             std::span<const double> input);

/// y = w_o c_s
std::vector<double> rnn_output(const RecurrentModel& model, std::span<const double> state);

/// One input sequence (time x input_dim) with an optional target class per
/// step; -1 marks steps without a target.
struct Sequence {
    Matrix inputs;
    std::vector<int> targets;
};

/// Hidden states c_1..c_T, one row per step.
Matrix rnn_states(const RecurrentModel& model, const Matrix& inputs);
/// Linear readouts y_1..y_T, one row per step.
Matrix rnn_forward(const RecurrentModel& model, const Matrix& inputs);

struct RecurrentGradients {
    double loss = 0.0;  // mean softmax cross-entropy over all targets
    Matrix w_in;
    Matrix w_nn;
    Matrix w_o;
};

/// Gradients through time. horizon = 0 backpropagates through the whole
/// sequence, otherwise through at most `horizon` steps before each target.
RecurrentGradients rnn_gradients(const RecurrentModel& model, std::span<const Sequence> batch,
                                 std::size_t horizon = 0);
double rnn_loss(const RecurrentModel& model, std::span<const Sequence> batch);

struct TrainedRecurrent {
    RecurrentModel model;
    std::vector<double> loss_trace;
};

/// Mini-batch SGD over sequences (batch_size counts sequences). hidden_dims[0]
/// is the state size. All sequences must share one length.
TrainedRecurrent rnn_train(std::span<const Sequence> sequences, std::size_t n_classes,
                           const TrainConfig& config);

/// Tabular rows as sequences: one feature per time step, target on the last
/// step only.
std::vector<Sequence> rows_as_sequences(const DataTable& data, std::span<const std::size_t> rows);

/// Trains on plan.train rows of a table; classes come from the whole label column.
TrainedRecurrent rnn_train(const DataTable& data, const SplitPlan& plan, const TrainConfig& config);

/// Prediction from the readout at the last step of each row.
Prediction rnn_predict(const RecurrentModel& model, const DataTable& data,
                       std::span<const std::size_t> rows);

}  // namespace dltune
