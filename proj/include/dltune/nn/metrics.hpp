#pragma once

#include <span>
#include <vector>

#include "dltune/nn/matrix.hpp"

namespace dltune {

/// Predicted label values plus one row of class scores per instance.
struct Prediction {
    std::vector<double> labels;
    Matrix scores;
};

/// Fraction of positions where the two label vectors agree.
double accuracy(std::span<const double> predicted, std::span<const double> truth);

}  // namespace dltune
