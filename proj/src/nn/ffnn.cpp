#include "dltune/nn/ffnn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dltune/common/rng.hpp"
#include "dltune/nn/tabular.hpp"

namespace dltune {
namespace {

struct ForwardCache {
    std::vector<Matrix> inputs;   // input to each layer, after dropout
    std::vector<Matrix> outputs;  // activation output of each hidden layer, before dropout
    std::vector<Matrix> masks;    // dropout scale per hidden layer (empty when off)
    Matrix probs;
};

Matrix dropout_mask(std::size_t rows, std::size_t cols, double p, Rng& rng) {
    Matrix mask(rows, cols);
    const double keep = 1.0 / (1.0 - p);
    for (auto& v : mask.data()) v = rng.bernoulli(p) ? 0.0 : keep;
    return mask;
}

void multiply_inplace(Matrix& a, const Matrix& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] *= b.data()[i];
}

ForwardCache forward(const FeedForwardModel& model, const Matrix& x, double visible_dropout,
                     double hidden_dropout, Rng* rng) {
    ForwardCache cache;
    Matrix current = x;
    if (rng && visible_dropout > 0.0)
        multiply_inplace(current, dropout_mask(current.rows(), current.cols(), visible_dropout, *rng));
    for (const auto& layer : model.hidden) {
        cache.inputs.push_back(current);
        Matrix z = matmul(current, layer.weights);
        add_row_vector(z, layer.bias);
        activate_inplace(layer.activation, z);
        cache.outputs.push_back(z);
        if (rng && hidden_dropout > 0.0) {
            Matrix mask = dropout_mask(z.rows(), z.cols(), hidden_dropout, *rng);
            multiply_inplace(z, mask);
            cache.masks.push_back(std::move(mask));
        } else {
            cache.masks.emplace_back();
        }
        current = std::move(z);
    }
    cache.inputs.push_back(current);
    Matrix logits = matmul(current, model.head.weights);
    add_row_vector(logits, model.head.bias);
    softmax_rows(logits);
    cache.probs = std::move(logits);
    return cache;
}

double cross_entropy_sum(const Matrix& probs, std::span<const int> targets) {
    double total = 0.0;
    for (std::size_t i = 0; i < probs.rows(); ++i)
        total -= std::log(std::max(probs(i, static_cast<std::size_t>(targets[i])), 1e-300));
    return total;
}

FeedForwardGradients backward(const FeedForwardModel& model, const ForwardCache& cache,
                              std::span<const int> targets) {
    const std::size_t n = cache.probs.rows();
    const double inv_n = 1.0 / static_cast<double>(n);
    const std::size_t n_layers = model.hidden.size() + 1;

    FeedForwardGradients g;
    g.weights.resize(n_layers);
    g.biases.resize(n_layers);

    Matrix delta = cache.probs;
    for (std::size_t i = 0; i < n; ++i) delta(i, static_cast<std::size_t>(targets[i])) -= 1.0;
    for (auto& v : delta.data()) v *= inv_n;

    for (std::size_t l = n_layers; l-- > 0;) {
        const DenseLayer& layer = l == n_layers - 1 ? model.head : model.hidden[l];
        g.weights[l] = matmul_tn(cache.inputs[l], delta);
        g.biases[l] = column_sums(delta);
        if (l == 0) break;
        Matrix upstream = matmul_nt(delta, layer.weights);
        const std::size_t below = l - 1;
        if (!cache.masks[below].data().empty()) multiply_inplace(upstream, cache.masks[below]);
        const auto& out = cache.outputs[below];
        const auto act = model.hidden[below].activation;
        for (std::size_t i = 0; i < upstream.size(); ++i)
            upstream.data()[i] *= activation_slope(act, out.data()[i]);
        delta = std::move(upstream);
    }
    return g;
}

void check_targets(const FeedForwardModel& model, const Matrix& features, std::span<const int> targets) {
    if (features.cols() != model.input_dim())
        throw std::invalid_argument("feature width does not match the model input");
    if (features.rows() != targets.size())
        throw std::invalid_argument("one target per row required");
    for (int t : targets)
        if (t < 0 || static_cast<std::size_t>(t) >= model.n_classes())
            throw std::invalid_argument("target class out of range");
}

}  // namespace

std::size_t FeedForwardModel::input_dim() const {
    return hidden.empty() ? head.input_dim() : hidden.front().input_dim();
}

void FeedForwardModel::validate() const {
    std::size_t width = input_dim();
    auto check = [&](const DenseLayer& layer) {
        if (layer.input_dim() != width) throw std::invalid_argument("layer dimensions disagree");
        if (layer.bias.size() != layer.output_dim()) throw std::invalid_argument("bias size mismatch");
        if (!layer.weights.all_finite()) throw std::invalid_argument("non-finite weight");
        for (double b : layer.bias)
            if (!std::isfinite(b)) throw std::invalid_argument("non-finite bias");
        width = layer.output_dim();
    };
    for (const auto& layer : hidden) check(layer);
    check(head);
    if (!classes.empty() && classes.size() != head.output_dim())
        throw std::invalid_argument("class list does not match the head width");
}

FeedForwardModel make_feedforward(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims,
                                  std::vector<double> classes, Activation activation,
                                  std::uint64_t seed) {
    if (input_dim == 0) throw std::invalid_argument("input dimension must be positive");
    if (classes.size() < 2) throw std::invalid_argument("classifier needs at least 2 classes");
    Rng rng(derive_seed(seed, "ffnn-init"));
    FeedForwardModel model;
    std::size_t width = input_dim;
    for (auto dim : hidden_dims) {
        if (dim == 0) throw std::invalid_argument("hidden dimensions must be positive");
        model.hidden.push_back({Matrix::glorot(width, dim, rng), std::vector<double>(dim, 0.0), activation});
        width = dim;
    }
    model.head = {Matrix::glorot(width, classes.size(), rng),
                  std::vector<double>(classes.size(), 0.0), Activation::linear};
    model.classes = std::move(classes);
    return model;
}

std::vector<double> train_feedforward(FeedForwardModel& model, const Matrix& features,
                                      std::span<const int> targets, const TrainConfig& config) {
    validate(config);
    if (config.epochs == 0) throw std::invalid_argument("epochs must be at least 1");
    check_targets(model, features, targets);
    const std::size_t n = features.rows();
    if (config.batch_size > n)
        throw std::invalid_argument("batch size " + std::to_string(config.batch_size) +
                                    " exceeds the " + std::to_string(n) + " training instances");

    Rng rng(derive_seed(config.seed, "sgd"));
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    std::vector<double> trace;
    const std::size_t limit = config.epoch_limit();
    for (std::size_t epoch = 1; epoch <= limit; ++epoch) {
        rng.shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t end = std::min(n, start + config.batch_size);
            Matrix xb(end - start, features.cols());
            std::vector<int> yb(end - start);
            for (std::size_t i = start; i < end; ++i) {
                std::copy(features.row(order[i]).begin(), features.row(order[i]).end(),
                          xb.row(i - start).begin());
                yb[i - start] = targets[order[i]];
            }
            const auto cache = forward(model, xb, config.visible_dropout, config.hidden_dropout, &rng);
            loss_sum += cross_entropy_sum(cache.probs, yb);
            const auto grads = backward(model, cache, yb);

            auto step = [&](DenseLayer& layer, std::size_t l) {
                auto& w = layer.weights.data();
                for (std::size_t i = 0; i < w.size(); ++i) w[i] -= config.learning_rate * grads.weights[l].data()[i];
                for (std::size_t i = 0; i < layer.bias.size(); ++i)
                    layer.bias[i] -= config.learning_rate * grads.biases[l][i];
            };
            for (std::size_t l = 0; l < model.hidden.size(); ++l) step(model.hidden[l], l);
            step(model.head, model.hidden.size());
        }
        const double mean_loss = loss_sum / static_cast<double>(n);
        if (!std::isfinite(mean_loss)) throw DivergenceError(epoch);
        trace.push_back(mean_loss);
        if (config.stopping.should_stop(trace)) break;
    }
    return trace;
}

TrainedClassifier ffnn_train(const DataTable& data, const SplitPlan& plan, const TrainConfig& config) {
    check_applicability(ModelKind::ffnn, config);
    validate(config);
    if (config.epochs == 0) throw std::invalid_argument("epochs must be at least 1");
    if (plan.train.empty()) throw std::invalid_argument("empty training split");
    const auto classes = table_classes(data);
    const Matrix x = feature_matrix(data, plan.train);
    const auto y = class_targets(data, plan.train, classes);

    TrainedClassifier out;
    out.model = make_feedforward(x.cols(), config.hidden_dims, classes.classes, config.activation,
                                 config.seed);
    out.loss_trace = train_feedforward(out.model, x, y, config);
    return out;
}

Prediction ffnn_predict(const FeedForwardModel& model, const Matrix& features) {
    if (features.cols() != model.input_dim())
        throw std::invalid_argument("feature width " + std::to_string(features.cols()) +
                                    " does not match model input " + std::to_string(model.input_dim()));
    auto cache = forward(model, features, 0.0, 0.0, nullptr);
    Prediction out;
    out.labels.resize(features.rows());
    for (std::size_t i = 0; i < features.rows(); ++i) {
        auto row = cache.probs.row(i);
        const auto best = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
        out.labels[i] = model.classes.empty() ? static_cast<double>(best) : model.classes[best];
    }
    out.scores = std::move(cache.probs);
    return out;
}

Prediction ffnn_predict(const FeedForwardModel& model, const DataTable& data,
                        std::span<const std::size_t> rows) {
    return ffnn_predict(model, feature_matrix(data, rows));
}

FeedForwardGradients ffnn_gradients(const FeedForwardModel& model, const Matrix& features,
                                    std::span<const int> targets) {
    check_targets(model, features, targets);
    const auto cache = forward(model, features, 0.0, 0.0, nullptr);
    auto g = backward(model, cache, targets);
    g.loss = cross_entropy_sum(cache.probs, targets) / static_cast<double>(features.rows());
    return g;
}

double ffnn_loss(const FeedForwardModel& model, const Matrix& features, std::span<const int> targets) {
    check_targets(model, features, targets);
    const auto cache = forward(model, features, 0.0, 0.0, nullptr);
    return cross_entropy_sum(cache.probs, targets) / static_cast<double>(features.rows());
}

}  // namespace dltune
