#include "dltune/nn/rnn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dltune/common/rng.hpp"
#include "dltune/nn/activation.hpp"
#include "dltune/nn/tabular.hpp"

namespace dltune {
namespace {

// Softmax of a readout row; returns -log p[target] and writes p - onehot into grad.
double softmax_xent(std::span<const double> y, int target, std::vector<double>& grad) {
    Matrix m(1, y.size(), std::vector<double>(y.begin(), y.end()));
    softmax_rows(m);
    grad.assign(m.data().begin(), m.data().end());
    const double p = std::max(grad[static_cast<std::size_t>(target)], 1e-300);
    grad[static_cast<std::size_t>(target)] -= 1.0;
    return -std::log(p);
}

void check_sequence(const RecurrentModel& model, const Sequence& seq) {
    if (seq.inputs.cols() != model.input_dim())
        throw std::invalid_argument("sequence input width does not match w_in");
    if (seq.targets.size() != seq.inputs.rows())
        throw std::invalid_argument("one target slot per time step required");
    for (int t : seq.targets)
        if (t >= static_cast<int>(model.output_dim()))
            throw std::invalid_argument("target class out of range");
}

}  // namespace

RecurrentModel::RecurrentModel(Matrix w_in, Matrix w_nn, Matrix w_o, std::vector<double> classes)
    : w_in_(std::move(w_in)), w_nn_(std::move(w_nn)), w_o_(std::move(w_o)), classes_(std::move(classes)) {
    if (w_nn_.rows() != w_nn_.cols()) throw std::invalid_argument("w_nn must be square");
    if (w_nn_.rows() == 0) throw std::invalid_argument("hidden dimension must be positive");
    if (w_in_.rows() != w_nn_.rows())
        throw std::invalid_argument("w_in rows must equal the hidden dimension");
    if (w_o_.cols() != w_nn_.rows())
        throw std::invalid_argument("w_o columns must equal the hidden dimension");
    if (!classes_.empty() && classes_.size() != w_o_.rows())
        throw std::invalid_argument("class list does not match the output width");
}

RecurrentModel RecurrentModel::random(std::size_t input_dim, std::size_t hidden_dim,
                                      std::size_t output_dim, std::uint64_t seed) {
    Rng rng(derive_seed(seed, "rnn-init"));
    auto w_in = Matrix::glorot(hidden_dim, input_dim, rng);
    auto w_nn = Matrix::glorot(hidden_dim, hidden_dim, rng);
    auto w_o = Matrix::glorot(output_dim, hidden_dim, rng);
    return RecurrentModel(std::move(w_in), std::move(w_nn), std::move(w_o));
}

std::vector<double> rnn_step(const RecurrentModel& model, std::span<const double> previous_state,
                             std::span<const double> input) {
    if (previous_state.size() != model.hidden_dim())
        throw std::invalid_argument("state size does not match w_nn");
    if (input.size() != model.input_dim()) throw std::invalid_argument("input size does not match w_in");
    auto state = matvec(model.w_nn(), previous_state);
    const auto drive = matvec(model.w_in(), input);
    for (std::size_t i = 0; i < state.size(); ++i) state[i] = std::tanh(state[i] + drive[i]);
    return state;
}

std::vector<double> rnn_output(const RecurrentModel& model, std::span<const double> state) {
    if (state.size() != model.hidden_dim()) throw std::invalid_argument("state size does not match w_o");
    return matvec(model.w_o(), state);
}

Matrix rnn_states(const RecurrentModel& model, const Matrix& inputs) {
    if (inputs.cols() != model.input_dim()) throw std::invalid_argument("input width does not match w_in");
    Matrix states(inputs.rows(), model.hidden_dim());
    std::vector<double> previous(model.hidden_dim(), 0.0);
    for (std::size_t t = 0; t < inputs.rows(); ++t) {
        auto c = rnn_step(model, previous, inputs.row(t));
        std::copy(c.begin(), c.end(), states.row(t).begin());
        previous = std::move(c);
    }
    return states;
}

Matrix rnn_forward(const RecurrentModel& model, const Matrix& inputs) {
    return matmul_nt(rnn_states(model, inputs), model.w_o());
}

RecurrentGradients rnn_gradients(const RecurrentModel& model, std::span<const Sequence> batch,
                                 std::size_t horizon) {
    const std::size_t h = model.hidden_dim();
    RecurrentGradients g;
    g.w_in = Matrix(model.w_in().rows(), model.w_in().cols());
    g.w_nn = Matrix(h, h);
    g.w_o = Matrix(model.w_o().rows(), h);

    std::size_t n_targets = 0;
    for (const auto& seq : batch) {
        check_sequence(model, seq);
        for (int t : seq.targets) n_targets += t >= 0 ? 1 : 0;
    }
    if (n_targets == 0) throw std::invalid_argument("batch has no targets");
    const double scale = 1.0 / static_cast<double>(n_targets);

    std::vector<double> dy;
    std::vector<double> delta(h);
    std::vector<double> dz(h);
    const std::vector<double> zero_state(h, 0.0);
    for (const auto& seq : batch) {
        const Matrix states = rnn_states(model, seq.inputs);
        const std::size_t steps = seq.inputs.rows();
        for (std::size_t t = 0; t < steps; ++t) {
            if (seq.targets[t] < 0) continue;
            const auto y = matvec(model.w_o(), states.row(t));
            g.loss += softmax_xent(y, seq.targets[t], dy) * scale;
            for (auto& v : dy) v *= scale;
            for (std::size_t k = 0; k < dy.size(); ++k)
                for (std::size_t j = 0; j < h; ++j) g.w_o(k, j) += dy[k] * states(t, j);

            delta = matvec_t(model.w_o(), dy);
            const std::size_t depth = horizon == 0 ? t + 1 : std::min(horizon, t + 1);
            for (std::size_t back = 0; back < depth; ++back) {
                const std::size_t s = t - back;
                auto c = states.row(s);
                std::span<const double> p = s == 0 ? std::span<const double>(zero_state) : states.row(s - 1);
                auto in = seq.inputs.row(s);
                for (std::size_t j = 0; j < h; ++j) dz[j] = delta[j] * (1.0 - c[j] * c[j]);
                for (std::size_t j = 0; j < h; ++j) {
                    for (std::size_t k = 0; k < h; ++k) g.w_nn(j, k) += dz[j] * p[k];
                    for (std::size_t k = 0; k < in.size(); ++k) g.w_in(j, k) += dz[j] * in[k];
                }
                delta = matvec_t(model.w_nn(), dz);
            }
        }
    }
    return g;
}

double rnn_loss(const RecurrentModel& model, std::span<const Sequence> batch) {
    return rnn_gradients(model, batch, 1).loss;
}

TrainedRecurrent rnn_train(std::span<const Sequence> sequences, std::size_t n_classes,
                           const TrainConfig& config) {
    check_applicability(ModelKind::rnn, config);
    validate(config);
    if (config.epochs == 0) throw std::invalid_argument("epochs must be at least 1");
    if (sequences.empty()) throw std::invalid_argument("no sequences to train on");
    const std::size_t steps = sequences.front().inputs.rows();
    if (steps == 0) throw std::invalid_argument("empty sequences");
    for (const auto& seq : sequences)
        if (seq.inputs.rows() != steps)
            throw std::invalid_argument("sequences must share one length");
    if (config.bptt_horizon > steps)
        throw std::invalid_argument("truncation horizon exceeds the sequence length");
    if (config.batch_size > sequences.size())
        throw std::invalid_argument("batch size exceeds the number of training sequences");
    if (n_classes < 2) throw std::invalid_argument("classifier needs at least 2 classes");

    TrainedRecurrent out;
    out.model = RecurrentModel::random(sequences.front().inputs.cols(), config.hidden_dims.front(),
                                       n_classes, config.seed);
    Rng rng(derive_seed(config.seed, "sgd"));
    std::vector<std::size_t> order(sequences.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    const std::size_t limit = config.epoch_limit();
    std::vector<Sequence> batch;
    for (std::size_t epoch = 1; epoch <= limit; ++epoch) {
        rng.shuffle(order);
        double loss_sum = 0.0;
        std::size_t target_count = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            batch.clear();
            std::size_t batch_targets = 0;
            for (std::size_t i = start; i < end; ++i) {
                batch.push_back(sequences[order[i]]);
                for (int t : batch.back().targets) batch_targets += t >= 0 ? 1 : 0;
            }
            const auto g = rnn_gradients(out.model, batch, config.bptt_horizon);
            loss_sum += g.loss * static_cast<double>(batch_targets);
            target_count += batch_targets;
            auto step = [&](Matrix& w, const Matrix& grad) {
                for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] -= config.learning_rate * grad.data()[i];
            };
            step(out.model.w_in(), g.w_in);
            step(out.model.w_nn(), g.w_nn);
            step(out.model.w_o(), g.w_o);
        }
        const double mean_loss = loss_sum / static_cast<double>(target_count);
        if (!std::isfinite(mean_loss)) throw DivergenceError(epoch);
        out.loss_trace.push_back(mean_loss);
        if (config.stopping.should_stop(out.loss_trace)) break;
    }
    return out;
}

std::vector<Sequence> rows_as_sequences(const DataTable& data, std::span<const std::size_t> rows) {
    const auto classes = table_classes(data);
    const auto features = data.feature_indices();
    std::vector<Sequence> out;
    out.reserve(rows.size());
    for (auto r : rows) {
        Sequence seq;
        seq.inputs = Matrix(features.size(), 1);
        for (std::size_t t = 0; t < features.size(); ++t) seq.inputs(t, 0) = data.at(r, features[t]);
        seq.targets.assign(features.size(), -1);
        seq.targets.back() = classes.index_of(data.at(r, data.label_index()));
        out.push_back(std::move(seq));
    }
    return out;
}

TrainedRecurrent rnn_train(const DataTable& data, const SplitPlan& plan, const TrainConfig& config) {
    if (plan.train.empty()) throw std::invalid_argument("empty training split");
    const auto classes = table_classes(data);
    const auto sequences = rows_as_sequences(data, plan.train);
    auto out = rnn_train(sequences, classes.size(), config);
    out.model.set_classes(classes.classes);
    return out;
}

Prediction rnn_predict(const RecurrentModel& model, const DataTable& data,
                       std::span<const std::size_t> rows) {
    const auto features = data.feature_indices();
    if (model.input_dim() != 1) throw std::invalid_argument("tabular RNN expects one input per step");
    Prediction out;
    out.scores = Matrix(rows.size(), model.output_dim());
    out.labels.resize(rows.size());
    Matrix inputs(features.size(), 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t t = 0; t < features.size(); ++t) inputs(t, 0) = data.at(rows[i], features[t]);
        const Matrix states = rnn_states(model, inputs);
        Matrix y(1, model.output_dim(), rnn_output(model, states.row(states.rows() - 1)));
        softmax_rows(y);
        std::copy(y.data().begin(), y.data().end(), out.scores.row(i).begin());
        const auto best = static_cast<std::size_t>(std::max_element(y.data().begin(), y.data().end()) -
                                                   y.data().begin());
        out.labels[i] = model.classes().empty() ? static_cast<double>(best) : model.classes()[best];
    }
    return out;
}

}  // namespace dltune
