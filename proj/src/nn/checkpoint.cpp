#include "dltune/nn/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "dltune/common/csv.hpp"

namespace dltune {
namespace {

using json = nlohmann::ordered_json;

constexpr const char* kFormat = "dltune-checkpoint";
constexpr int kVersion = 1;

Tensor matrix_tensor(const std::string& name, const Matrix& m) {
    return {name, {m.rows(), m.cols()}, m.data()};
}

Tensor vector_tensor(const std::string& name, const std::vector<double>& v) {
    return {name, {v.size()}, v};
}

Matrix as_matrix(const Tensor& t) {
    if (t.shape.size() != 2) throw std::invalid_argument("tensor " + t.name + " is not a matrix");
    return Matrix(t.shape[0], t.shape[1], t.values);
}

std::vector<double> as_vector(const Tensor& t) {
    if (t.shape.size() != 1) throw std::invalid_argument("tensor " + t.name + " is not a vector");
    return t.values;
}

std::string layer_name(const std::string& prefix, std::size_t k) { return prefix + std::to_string(k); }

void require_kind(const Checkpoint& c, std::initializer_list<const char*> kinds) {
    for (const char* k : kinds)
        if (c.kind == k) return;
    throw std::invalid_argument("unexpected checkpoint kind " + c.kind);
}

bool has_tensor(const Checkpoint& c, const std::string& name) {
    for (const auto& t : c.tensors)
        if (t.name == name) return true;
    return false;
}

}  // namespace

const Tensor& Checkpoint::tensor(const std::string& name) const {
    for (const auto& t : tensors)
        if (t.name == name) return t;
    throw std::invalid_argument("checkpoint has no tensor " + name);
}

std::string to_json(const Checkpoint& c) {
    json doc;
    doc["format"] = kFormat;
    doc["version"] = kVersion;
    doc["kind"] = c.kind;
    doc["classes"] = c.classes;
    doc["activations"] = c.activations;
    json tensors = json::array();
    for (const auto& t : c.tensors) tensors.push_back({{"name", t.name}, {"shape", t.shape}, {"values", t.values}});
    doc["tensors"] = std::move(tensors);
    return doc.dump(1) + "\n";
}

Checkpoint parse_checkpoint(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("checkpoint is not valid JSON: ") + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != kFormat) throw std::invalid_argument("not a dltune checkpoint");
        if (doc.at("version").get<int>() != kVersion) throw std::invalid_argument("unsupported checkpoint version");
        Checkpoint c;
        c.kind = doc.at("kind").get<std::string>();
        c.classes = doc.value("classes", std::vector<double>{});
        c.activations = doc.value("activations", std::vector<std::string>{});
        for (const auto& t : doc.at("tensors")) {
            Tensor tensor{t.at("name").get<std::string>(), t.at("shape").get<std::vector<std::size_t>>(),
                          t.at("values").get<std::vector<double>>()};
            std::size_t count = 1;
            for (auto d : tensor.shape) count *= d;
            if (count != tensor.values.size())
                throw std::invalid_argument("tensor " + tensor.name + " has " + std::to_string(tensor.values.size()) +
                                            " values for " + std::to_string(count) + " cells");
            c.tensors.push_back(std::move(tensor));
        }
        return c;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed checkpoint: ") + e.what());
    }
}

Checkpoint make_checkpoint(const FeedForwardModel& model, ModelKind kind) {
    if (kind == ModelKind::rnn) throw std::invalid_argument("feed-forward model cannot be stored as RNN");
    Checkpoint c{to_string(kind), model.classes, {}, {}};
    for (std::size_t k = 0; k < model.hidden.size(); ++k) {
        c.activations.push_back(to_string(model.hidden[k].activation));
        c.tensors.push_back(matrix_tensor(layer_name("hidden.weight.", k), model.hidden[k].weights));
        c.tensors.push_back(vector_tensor(layer_name("hidden.bias.", k), model.hidden[k].bias));
    }
    c.tensors.push_back(matrix_tensor("head.weight", model.head.weights));
    c.tensors.push_back(vector_tensor("head.bias", model.head.bias));
    return c;
}

Checkpoint make_checkpoint(const RecurrentModel& model) {
    Checkpoint c{"RNN", model.classes(), {"tanh"}, {}};
    c.tensors.push_back(matrix_tensor("w_in", model.w_in()));
    c.tensors.push_back(matrix_tensor("w_nn", model.w_nn()));
    c.tensors.push_back(matrix_tensor("w_o", model.w_o()));
    return c;
}

Checkpoint make_checkpoint(const AutoencoderStack& stack) {
    Checkpoint c{"AE-STACK", {}, {}, {}};
    for (std::size_t k = 0; k < stack.levels.size(); ++k) {
        const auto& level = stack.levels[k];
        c.activations.push_back(to_string(level.encoder.activation));
        c.tensors.push_back(matrix_tensor(layer_name("encoder.weight.", k), level.encoder.weights));
        c.tensors.push_back(vector_tensor(layer_name("encoder.bias.", k), level.encoder.bias));
        c.tensors.push_back(matrix_tensor(layer_name("decoder.weight.", k), level.decoder.weights));
        c.tensors.push_back(vector_tensor(layer_name("decoder.bias.", k), level.decoder.bias));
    }
    return c;
}

Checkpoint make_checkpoint(const RbmStack& stack) {
    Checkpoint c{"RBM-STACK", {}, {}, {}};
    for (std::size_t k = 0; k < stack.layers.size(); ++k) {
        const auto& rbm = stack.layers[k];
        c.activations.push_back("sigmoid");
        c.tensors.push_back(matrix_tensor(layer_name("rbm.weight.", k), rbm.weights));
        c.tensors.push_back(vector_tensor(layer_name("rbm.visible_bias.", k), rbm.visible_bias));
        c.tensors.push_back(vector_tensor(layer_name("rbm.hidden_bias.", k), rbm.hidden_bias));
    }
    return c;
}

FeedForwardModel load_feedforward(const Checkpoint& c) {
    require_kind(c, {"FFNN", "SAE", "DBN"});
    FeedForwardModel model;
    for (std::size_t k = 0; has_tensor(c, layer_name("hidden.weight.", k)); ++k) {
        if (k >= c.activations.size()) throw std::invalid_argument("missing activation for hidden layer");
        model.hidden.push_back({as_matrix(c.tensor(layer_name("hidden.weight.", k))),
                                as_vector(c.tensor(layer_name("hidden.bias.", k))),
                                parse_activation(c.activations[k])});
    }
    model.head = {as_matrix(c.tensor("head.weight")), as_vector(c.tensor("head.bias")), Activation::linear};
    model.classes = c.classes;
    model.validate();
    return model;
}

RecurrentModel load_recurrent(const Checkpoint& c) {
    require_kind(c, {"RNN"});
    return RecurrentModel(as_matrix(c.tensor("w_in")), as_matrix(c.tensor("w_nn")), as_matrix(c.tensor("w_o")),
                          c.classes);
}

AutoencoderStack load_autoencoder_stack(const Checkpoint& c) {
    require_kind(c, {"AE-STACK"});
    AutoencoderStack stack;
    for (std::size_t k = 0; has_tensor(c, layer_name("encoder.weight.", k)); ++k) {
        if (k >= c.activations.size()) throw std::invalid_argument("missing activation for encoder");
        AutoencoderLevel level;
        level.encoder = {as_matrix(c.tensor(layer_name("encoder.weight.", k))),
                         as_vector(c.tensor(layer_name("encoder.bias.", k))), parse_activation(c.activations[k])};
        level.decoder = {as_matrix(c.tensor(layer_name("decoder.weight.", k))),
                         as_vector(c.tensor(layer_name("decoder.bias.", k))), Activation::linear};
        stack.levels.push_back(std::move(level));
    }
    stack.validate();
    return stack;
}

RbmStack load_rbm_stack(const Checkpoint& c) {
    require_kind(c, {"RBM-STACK"});
    RbmStack stack;
    for (std::size_t k = 0; has_tensor(c, layer_name("rbm.weight.", k)); ++k)
        stack.layers.push_back({as_matrix(c.tensor(layer_name("rbm.weight.", k))),
                                as_vector(c.tensor(layer_name("rbm.visible_bias.", k))),
                                as_vector(c.tensor(layer_name("rbm.hidden_bias.", k)))});
    stack.validate();
    return stack;
}

void save_checkpoint_file(const Checkpoint& checkpoint, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << to_json(checkpoint);
    if (!out) throw std::runtime_error("write failed: " + path);
}

Checkpoint load_checkpoint_file(const std::string& path) { return parse_checkpoint(read_file(path)); }

}  // namespace dltune
