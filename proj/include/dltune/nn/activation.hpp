#pragma once

#include <span>
#include <string>
#include <string_view>

#include "dltune/nn/matrix.hpp"

namespace dltune {

enum class Activation { sigmoid, tanh, relu, linear };

std::string to_string(Activation a);
Activation parse_activation(std::string_view name);

double activate(Activation a, double x);
/// Derivative expressed through the activation's output value y = f(x).
double activation_slope(Activation a, double y);

void activate_inplace(Activation a, Matrix& m);

/// Numerically stable softmax over each row.
void softmax_rows(Matrix& m);

double sigmoid(double x);

}  // namespace dltune
