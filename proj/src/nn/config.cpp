#include "dltune/nn/config.hpp"

#include <cctype>
#include <algorithm>
#include <cmath>

namespace dltune {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::ffnn: return "FFNN";
        case ModelKind::rnn: return "RNN";
        case ModelKind::sae: return "SAE";
        case ModelKind::dbn: return "DBN";
    }
    return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
    std::string upper(name);
    for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (upper == "FFNN") return ModelKind::ffnn;
    if (upper == "RNN") return ModelKind::rnn;
    if (upper == "SAE") return ModelKind::sae;
    if (upper == "DBN") return ModelKind::dbn;
    throw std::invalid_argument("unknown model kind '" + std::string(name) + "'");
}

bool StoppingCriterion::should_stop(const std::vector<double>& trace) const {
    if (trace.size() >= max_epochs) return true;
    if (patience == 0 || trace.size() <= patience) return false;
    const double reference = trace[trace.size() - patience - 1];
    for (std::size_t i = trace.size() - patience; i < trace.size(); ++i)
        if (reference - trace[i] >= min_loss_delta) return false;
    return true;
}

void validate(const TrainConfig& c) {
    if (!(c.learning_rate >= 0.0) || !std::isfinite(c.learning_rate))
        throw std::invalid_argument("learning rate must be a finite non-negative number");
    if (c.batch_size == 0) throw std::invalid_argument("batch size must be positive");
    if (c.hidden_dims.empty()) throw std::invalid_argument("hidden_dims must not be empty");
    if (std::find(c.hidden_dims.begin(), c.hidden_dims.end(), 0u) != c.hidden_dims.end())
        throw std::invalid_argument("hidden dimensions must be positive");
    if (!(c.hidden_dropout >= 0.0 && c.hidden_dropout < 1.0))
        throw std::invalid_argument("hidden dropout must lie in [0, 1)");
    if (!(c.visible_dropout >= 0.0 && c.visible_dropout < 1.0))
        throw std::invalid_argument("visible dropout must lie in [0, 1)");
    if (c.stopping.max_epochs == 0) throw std::invalid_argument("stopping.max_epochs must be >= 1");
}

void check_applicability(ModelKind kind, const TrainConfig& c) {
    if (kind == ModelKind::rnn && c.hidden_dropout != 0.0)
        throw std::invalid_argument("hidden dropout is not available for RNN");
    if ((kind == ModelKind::ffnn || kind == ModelKind::rnn) && c.visible_dropout != 0.0)
        throw std::invalid_argument("visible dropout is not available for " + to_string(kind));
}

DivergenceError::DivergenceError(std::size_t epoch)
    : std::runtime_error("training diverged (non-finite loss) at epoch " + std::to_string(epoch)),
      epoch_(epoch) {}

}  // namespace dltune
