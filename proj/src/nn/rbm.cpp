#include "dltune/nn/rbm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dltune/common/rng.hpp"
#include "dltune/nn/activation.hpp"
#include "dltune/nn/tabular.hpp"

namespace dltune {
namespace {

void require_unit_interval(const Matrix& m) {
    for (double v : m.data())
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("RBM input must lie in [0, 1] (got " + std::to_string(v) + ")");
}

double cd1_inplace(Rbm& rbm, const Matrix& v0, double lr, Rng& rng) {
    const double inv_b = 1.0 / static_cast<double>(v0.rows());
    const Matrix h0 = rbm.hidden_probabilities(v0);
    Matrix h0_sample = h0;
    for (auto& p : h0_sample.data()) p = rng.uniform01() < p ? 1.0 : 0.0;
    const Matrix v1 = rbm.visible_probabilities(h0_sample);
    const Matrix h1 = rbm.hidden_probabilities(v1);

    double err = 0.0;
    for (std::size_t i = 0; i < v0.size(); ++i) {
        const double d = v0.data()[i] - v1.data()[i];
        err += d * d;
    }
    err /= static_cast<double>(v0.size());

    const Matrix positive = matmul_tn(v0, h0);
    const Matrix negative = matmul_tn(v1, h1);
    for (std::size_t i = 0; i < positive.size(); ++i)
        rbm.weights.data()[i] += lr * (positive.data()[i] - negative.data()[i]) * inv_b;
    const auto sv0 = column_sums(v0);
    const auto sv1 = column_sums(v1);
    for (std::size_t j = 0; j < sv0.size(); ++j) rbm.visible_bias[j] += lr * (sv0[j] - sv1[j]) * inv_b;
    const auto sh0 = column_sums(h0);
    const auto sh1 = column_sums(h1);
    for (std::size_t j = 0; j < sh0.size(); ++j) rbm.hidden_bias[j] += lr * (sh0[j] - sh1[j]) * inv_b;
    return err;
}

}  // namespace

Rbm Rbm::random(std::size_t visible, std::size_t hidden, std::uint64_t seed) {
    if (visible == 0 || hidden == 0) throw std::invalid_argument("RBM dimensions must be positive");
    Rng rng(seed);
    return Rbm{Matrix::glorot(visible, hidden, rng), std::vector<double>(visible, 0.0),
               std::vector<double>(hidden, 0.0)};
}

Matrix Rbm::hidden_probabilities(const Matrix& visible) const {
    Matrix h = matmul(visible, weights);
    add_row_vector(h, hidden_bias);
    activate_inplace(Activation::sigmoid, h);
    return h;
}

Matrix Rbm::visible_probabilities(const Matrix& hidden) const {
    Matrix v = matmul_nt(hidden, weights);
    add_row_vector(v, visible_bias);
    activate_inplace(Activation::sigmoid, v);
    return v;
}

CdStep rbm_cd1_update(const Rbm& rbm, const Matrix& batch, double learning_rate, std::uint64_t seed) {
    if (batch.cols() != rbm.visible_dim()) throw std::invalid_argument("batch width does not match the RBM");
    if (batch.rows() == 0) throw std::invalid_argument("empty batch");
    require_unit_interval(batch);
    CdStep out{rbm, 0.0};
    Rng rng(seed);
    out.reconstruction_error = cd1_inplace(out.rbm, batch, learning_rate, rng);
    return out;
}

void RbmStack::validate() const {
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const auto& rbm = layers[k];
        if (rbm.visible_bias.size() != rbm.visible_dim() || rbm.hidden_bias.size() != rbm.hidden_dim())
            throw std::invalid_argument("RBM bias size mismatch at layer " + std::to_string(k));
        for (double b : rbm.visible_bias)
            if (!std::isfinite(b)) throw std::invalid_argument("non-finite RBM bias");
        for (double b : rbm.hidden_bias)
            if (!std::isfinite(b)) throw std::invalid_argument("non-finite RBM bias");
        if (k > 0 && rbm.visible_dim() != layers[k - 1].hidden_dim())
            throw std::invalid_argument("RBM " + std::to_string(k) + " visible size does not match previous hidden size");
    }
}

Matrix RbmStack::transform(const Matrix& visible) const {
    Matrix current = visible;
    for (const auto& rbm : layers) current = rbm.hidden_probabilities(current);
    return current;
}

DbnPretrainResult dbn_pretrain(const Matrix& x, const TrainConfig& config) {
    check_applicability(ModelKind::dbn, config);
    validate(config);
    if (x.rows() == 0 || x.cols() == 0) throw std::invalid_argument("no data to pretrain on");
    require_unit_interval(x);
    if (config.batch_size > x.rows())
        throw std::invalid_argument("batch size exceeds the number of training instances");

    DbnPretrainResult out;
    Rng rng(derive_seed(config.seed, "dbn-pretrain"));
    std::size_t width = x.cols();
    for (std::size_t k = 0; k < config.hidden_dims.size(); ++k) {
        out.stack.layers.push_back(
            Rbm::random(width, config.hidden_dims[k], derive_seed(derive_seed(config.seed, "dbn-init"), k)));
        width = config.hidden_dims[k];
    }

    Matrix input = x;
    std::vector<std::size_t> order(x.rows());
    for (auto& rbm : out.stack.layers) {
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::vector<double> trace;
        const std::size_t limit = config.epoch_limit();
        for (std::size_t epoch = 1; epoch <= limit; ++epoch) {
            rng.shuffle(order);
            double err_sum = 0.0;
            std::size_t batches = 0;
            for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
                const std::size_t end = std::min(order.size(), start + config.batch_size);
                Matrix batch(end - start, input.cols());
                for (std::size_t i = start; i < end; ++i)
                    std::copy(input.row(order[i]).begin(), input.row(order[i]).end(), batch.row(i - start).begin());
                err_sum += cd1_inplace(rbm, batch, config.learning_rate, rng);
                ++batches;
            }
            const double mean_err = err_sum / static_cast<double>(batches);
            if (!std::isfinite(mean_err) || !rbm.weights.all_finite()) throw DivergenceError(epoch);
            trace.push_back(mean_err);
            if (config.stopping.should_stop(trace)) break;
        }
        out.reconstruction_traces.push_back(std::move(trace));
        input = rbm.hidden_probabilities(input);
    }
    out.stack.validate();
    return out;
}

DbnPretrainResult dbn_pretrain(const DataTable& data, const SplitPlan& plan, const TrainConfig& config) {
    if (plan.train.empty()) throw std::invalid_argument("empty training split");
    return dbn_pretrain(feature_matrix(data, plan.train), config);
}

TrainedClassifier dbn_classify(const RbmStack& stack, const DataTable& data, const SplitPlan& plan,
                               const TrainConfig& config) {
    check_applicability(ModelKind::dbn, config);
    stack.validate();
    if (stack.layers.empty()) throw std::invalid_argument("empty RBM stack");
    if (plan.train.empty()) throw std::invalid_argument("empty training split");
    const auto classes = table_classes(data);
    const Matrix x = feature_matrix(data, plan.train);
    if (x.cols() != stack.layers.front().visible_dim())
        throw std::invalid_argument("stack input does not match the feature width");
    const auto y = class_targets(data, plan.train, classes);

    TrainedClassifier out;
    for (const auto& rbm : stack.layers)
        out.model.hidden.push_back({rbm.weights, rbm.hidden_bias, Activation::sigmoid});
    Rng rng(derive_seed(config.seed, "dbn-head"));
    const std::size_t top = stack.layers.back().hidden_dim();
    out.model.head = {Matrix::glorot(top, classes.size(), rng), std::vector<double>(classes.size(), 0.0),
                      Activation::linear};
    out.model.classes = classes.classes;
    out.loss_trace = train_feedforward(out.model, x, y, config);
    return out;
}

}  // namespace dltune
