#include "dltune/nn/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dltune/common/rng.hpp"
#include "dltune/nn/tabular.hpp"

namespace dltune {
namespace {

Matrix apply_layer(const DenseLayer& layer, const Matrix& x) {
    Matrix z = matmul(x, layer.weights);
    add_row_vector(z, layer.bias);
    activate_inplace(layer.activation, z);
    return z;
}

AutoencoderLevel make_level(std::size_t input_dim, std::size_t code_dim, Activation activation, Rng& rng) {
    AutoencoderLevel level;
    level.encoder = {Matrix::glorot(input_dim, code_dim, rng), std::vector<double>(code_dim, 0.0), activation};
    level.decoder = {Matrix::glorot(code_dim, input_dim, rng), std::vector<double>(input_dim, 0.0),
                     Activation::linear};
    return level;
}

// One epoch of SGD on a single level. Returns the mean clean-input squared error
// accumulated over the batches.
double train_level_epoch(AutoencoderLevel& level, const Matrix& x, const TrainConfig& config,
                         std::vector<std::size_t>& order, Rng& rng) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    rng.shuffle(order);
    double sq_sum = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
        const std::size_t end = std::min(n, start + config.batch_size);
        const std::size_t b = end - start;
        Matrix clean(b, d);
        for (std::size_t i = start; i < end; ++i)
            std::copy(x.row(order[i]).begin(), x.row(order[i]).end(), clean.row(i - start).begin());
        Matrix noisy = clean;
        if (config.visible_dropout > 0.0)
            for (auto& v : noisy.data())
                if (rng.bernoulli(config.visible_dropout)) v = 0.0;

        Matrix code = apply_layer(level.encoder, noisy);
        Matrix mask;
        Matrix code_used = code;
        if (config.hidden_dropout > 0.0) {
            mask = Matrix(code.rows(), code.cols());
            const double keep = 1.0 / (1.0 - config.hidden_dropout);
            for (auto& v : mask.data()) v = rng.bernoulli(config.hidden_dropout) ? 0.0 : keep;
            for (std::size_t i = 0; i < code_used.size(); ++i) code_used.data()[i] *= mask.data()[i];
        }
        Matrix recon = apply_layer(level.decoder, code_used);

        // Loss per batch: (1 / (b d)) * sum (recon - clean)^2
        Matrix delta(b, d);
        const double scale = 2.0 / static_cast<double>(b * d);
        for (std::size_t i = 0; i < delta.size(); ++i) {
            const double diff = recon.data()[i] - clean.data()[i];
            sq_sum += diff * diff;
            delta.data()[i] = scale * diff;
        }
        const Matrix grad_wd = matmul_tn(code_used, delta);
        const auto grad_bd = column_sums(delta);
        Matrix dcode = matmul_nt(delta, level.decoder.weights);
        for (std::size_t i = 0; i < dcode.size(); ++i) {
            if (!mask.data().empty()) dcode.data()[i] *= mask.data()[i];
            dcode.data()[i] *= activation_slope(level.encoder.activation, code.data()[i]);
        }
        const Matrix grad_we = matmul_tn(noisy, dcode);
        const auto grad_be = column_sums(dcode);

        const double lr = config.learning_rate;
        for (std::size_t i = 0; i < grad_wd.size(); ++i) level.decoder.weights.data()[i] -= lr * grad_wd.data()[i];
        for (std::size_t i = 0; i < grad_bd.size(); ++i) level.decoder.bias[i] -= lr * grad_bd[i];
        for (std::size_t i = 0; i < grad_we.size(); ++i) level.encoder.weights.data()[i] -= lr * grad_we.data()[i];
        for (std::size_t i = 0; i < grad_be.size(); ++i) level.encoder.bias[i] -= lr * grad_be[i];
    }
    return sq_sum / static_cast<double>(n * d);
}

}  // namespace

void AutoencoderStack::validate() const {
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const auto& level = levels[k];
        if (level.decoder.input_dim() != level.code_dim() || level.decoder.output_dim() != level.input_dim())
            throw std::invalid_argument("decoder does not mirror its encoder at level " + std::to_string(k));
        if (level.encoder.bias.size() != level.code_dim() || level.decoder.bias.size() != level.input_dim())
            throw std::invalid_argument("bias size mismatch at level " + std::to_string(k));
        if (k > 0 && level.input_dim() != levels[k - 1].code_dim())
            throw std::invalid_argument("level " + std::to_string(k) + " input does not match previous code size");
    }
}

Matrix AutoencoderStack::encode(const Matrix& x) const {
    Matrix current = x;
    for (const auto& level : levels) current = apply_layer(level.encoder, current);
    return current;
}

Matrix AutoencoderStack::reconstruct(const Matrix& x) const {
    Matrix current = encode(x);
    for (std::size_t k = levels.size(); k-- > 0;) current = apply_layer(levels[k].decoder, current);
    return current;
}

double reconstruction_mse(const Matrix& x, const Matrix& reconstruction) {
    if (x.rows() != reconstruction.rows() || x.cols() != reconstruction.cols())
        throw std::invalid_argument("reconstruction shape mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x.data()[i] - reconstruction.data()[i];
        total += diff * diff;
    }
    return total / static_cast<double>(x.size());
}

SaePretrainResult sae_pretrain(const Matrix& x, const TrainConfig& config) {
    check_applicability(ModelKind::sae, config);
    validate(config);
    if (x.rows() == 0 || x.cols() == 0) throw std::invalid_argument("no data to pretrain on");
    if (config.batch_size > x.rows())
        throw std::invalid_argument("batch size exceeds the number of training instances");

    Rng init_rng(derive_seed(config.seed, "sae-init"));
    Rng rng(derive_seed(config.seed, "sae-pretrain"));
    SaePretrainResult out;
    std::size_t width = x.cols();
    for (auto dim : config.hidden_dims) {
        if (config.strict_compression && dim >= width)
            throw std::invalid_argument("code size " + std::to_string(dim) + " does not compress input of size " +
                                        std::to_string(width));
        out.stack.levels.push_back(make_level(width, dim, config.activation, init_rng));
        width = dim;
    }

    Matrix level_input = x;
    std::vector<std::size_t> order(x.rows());
    for (auto& level : out.stack.levels) {
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::vector<double> trace;
        const std::size_t limit = config.epoch_limit();
        for (std::size_t epoch = 1; epoch <= limit; ++epoch) {
            const double loss = train_level_epoch(level, level_input, config, order, rng);
            if (!std::isfinite(loss)) throw DivergenceError(epoch);
            trace.push_back(loss);
            if (config.stopping.should_stop(trace)) break;
        }
        out.level_traces.push_back(std::move(trace));
        level_input = apply_layer(level.encoder, level_input);
    }
    out.stack.validate();
    return out;
}

SaePretrainResult sae_pretrain(const DataTable& data, const SplitPlan& plan, const TrainConfig& config) {
    if (plan.train.empty()) throw std::invalid_argument("empty training split");
    return sae_pretrain(feature_matrix(data, plan.train), config);
}

TrainedClassifier sae_finetune_classify(const AutoencoderStack& stack, const DataTable& data,
                                        const SplitPlan& plan, const TrainConfig& config) {
    check_applicability(ModelKind::sae, config);
    stack.validate();
    if (stack.levels.empty()) throw std::invalid_argument("empty autoencoder stack");
    if (plan.train.empty()) throw std::invalid_argument("empty training split");
    const auto classes = table_classes(data);
    const Matrix x = feature_matrix(data, plan.train);
    if (x.cols() != stack.levels.front().input_dim())
        throw std::invalid_argument("stack input does not match the feature width");
    const auto y = class_targets(data, plan.train, classes);

    TrainedClassifier out;
    Rng rng(derive_seed(config.seed, "sae-head"));
    for (const auto& level : stack.levels) out.model.hidden.push_back(level.encoder);
    const std::size_t top = stack.levels.back().code_dim();
    out.model.head = {Matrix::glorot(top, classes.size(), rng), std::vector<double>(classes.size(), 0.0),
                      Activation::linear};
    out.model.classes = classes.classes;
    out.loss_trace = train_feedforward(out.model, x, y, config);
    return out;
}

}  // namespace dltune
