#include "dltune/nn/metrics.hpp"

#include <stdexcept>

namespace dltune {

double accuracy(std::span<const double> predicted, std::span<const double> truth) {
    if (predicted.size() != truth.size()) throw std::invalid_argument("accuracy: length mismatch");
    if (predicted.empty()) throw std::invalid_argument("accuracy: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == truth[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

}  // namespace dltune
