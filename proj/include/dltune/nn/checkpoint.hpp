#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dltune/nn/autoencoder.hpp"
#include "dltune/nn/config.hpp"
#include "dltune/nn/ffnn.hpp"
#include "dltune/nn/rbm.hpp"
#include "dltune/nn/rnn.hpp"

namespace dltune {

/// Named row-major tensor.
struct Tensor {
    std::string name;
    std::vector<std::size_t> shape;
    std::vector<double> values;
};

/// JSON checkpoint:
///   {"format": "dltune-checkpoint", "version": 1, "kind": "...",
///    "classes": [...], "activations": [...], "tensors": [{"name", "shape", "values"}]}
/// kind is FFNN/SAE/DBN for classifiers, RNN, or "AE-STACK" / "RBM-STACK" for
/// pretrained stacks.
struct Checkpoint {
    std::string kind;
    std::vector<double> classes;
    std::vector<std::string> activations;
    std::vector<Tensor> tensors;

    const Tensor& tensor(const std::string& name) const;
};

std::string to_json(const Checkpoint& checkpoint);
/// Throws std::invalid_argument on a malformed document or a shape/value
/// count mismatch.
Checkpoint parse_checkpoint(const std::string& text);

Checkpoint make_checkpoint(const FeedForwardModel& model, ModelKind kind = ModelKind::ffnn);
Checkpoint make_checkpoint(const RecurrentModel& model);
Checkpoint make_checkpoint(const AutoencoderStack& stack);
Checkpoint make_checkpoint(const RbmStack& stack);

FeedForwardModel load_feedforward(const Checkpoint& checkpoint);
RecurrentModel load_recurrent(const Checkpoint& checkpoint);
AutoencoderStack load_autoencoder_stack(const Checkpoint& checkpoint);
RbmStack load_rbm_stack(const Checkpoint& checkpoint);

void save_checkpoint_file(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint_file(const std::string& path);

}  // namespace dltune
