#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dltune/nn/config.hpp"

namespace dltune {

/// One hyperparameter axis: a discrete list of values or a closed interval.
/// Interval axes flagged `integer` draw whole numbers.
struct ParamAxis {
    std::string name;
    std::vector<double> values;
    double lo = 0.0;
    double hi = 0.0;
    bool continuous = false;
    bool integer = false;

    static ParamAxis discrete(std::string name, std::vector<double> values);
    static ParamAxis interval(std::string name, double lo, double hi, bool integer = false);

    bool contains(double value) const;
};

/// Hyperparameter assignment in axis order.
using Assignment = std::vector<std::pair<std::string, double>>;

std::optional<double> find_value(const Assignment& assignment, std::string_view name);

struct ParamSpace {
    std::vector<ParamAxis> axes;
    ModelKind model_kind = ModelKind::ffnn;

    /// Throws std::invalid_argument on duplicate names, empty discrete axes
    /// or lo >= hi.
    void validate() const;
    bool all_discrete() const;
    /// Product of the discrete cardinalities; throws if an axis is continuous.
    std::size_t grid_size() const;
    bool contains(const Assignment& assignment) const;
    const ParamAxis* axis(std::string_view name) const;
    /// Replaces the axis of the same name or appends a new one.
    void set_axis(ParamAxis axis);
};

/// FFNN/SAE/DBN: learning_rate {0.1..0.9} x batch_size {10..100} x
/// hidden_nodes {1..10}. RNN: learning_rate x numepochs {10..100} x
/// hidden_dim {1..10}.
ParamSpace default_space(ModelKind kind);

/// Axis names understood by apply_assignment.
const std::vector<std::string>& known_hyperparameters();

/// Overrides the matching fields of `base`. hidden_nodes and hidden_dim set
/// the width of every hidden layer; numepochs and epochs set the epoch count.
TrainConfig apply_assignment(TrainConfig base, const Assignment& assignment);

}  // namespace dltune
