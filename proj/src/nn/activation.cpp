#include "dltune/nn/activation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dltune {

std::string to_string(Activation a) {
    switch (a) {
        case Activation::sigmoid: return "sigmoid";
        case Activation::tanh: return "tanh";
        case Activation::relu: return "relu";
        case Activation::linear: return "linear";
    }
    return "unknown";
}

Activation parse_activation(std::string_view name) {
    if (name == "sigmoid" || name == "sigm") return Activation::sigmoid;
    if (name == "tanh") return Activation::tanh;
    if (name == "relu") return Activation::relu;
    if (name == "linear") return Activation::linear;
    throw std::invalid_argument("unknown activation '" + std::string(name) + "'");
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double activate(Activation a, double x) {
    switch (a) {
        case Activation::sigmoid: return sigmoid(x);
        case Activation::tanh: return std::tanh(x);
        case Activation::relu: return x > 0.0 ? x : 0.0;
        case Activation::linear: return x;
    }
    return x;
}

double activation_slope(Activation a, double y) {
    switch (a) {
        case Activation::sigmoid: return y * (1.0 - y);
        case Activation::tanh: return 1.0 - y * y;
        case Activation::relu: return y > 0.0 ? 1.0 : 0.0;
        case Activation::linear: return 1.0;
    }
    return 1.0;
}

void activate_inplace(Activation a, Matrix& m) {
    if (a == Activation::linear) return;
    for (auto& v : m.data()) v = activate(a, v);
}

void softmax_rows(Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto row = m.row(i);
        const double hi = *std::max_element(row.begin(), row.end());
        double total = 0.0;
        for (auto& v : row) {
            v = std::exp(v - hi);
            total += v;
        }
        for (auto& v : row) v /= total;
    }
}

}  // namespace dltune
