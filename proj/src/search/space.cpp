#include "dltune/search/space.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace dltune {

ParamAxis ParamAxis::discrete(std::string name, std::vector<double> values) {
    ParamAxis axis;
    axis.name = std::move(name);
    axis.values = std::move(values);
    return axis;
}

ParamAxis ParamAxis::interval(std::string name, double lo, double hi, bool integer) {
    ParamAxis axis;
    axis.name = std::move(name);
    axis.lo = lo;
    axis.hi = hi;
    axis.continuous = true;
    axis.integer = integer;
    return axis;
}

bool ParamAxis::contains(double value) const {
    if (continuous) {
        if (!(value >= lo && value <= hi)) return false;
        return !integer || value == std::floor(value);
    }
    return std::find(values.begin(), values.end(), value) != values.end();
}

std::optional<double> find_value(const Assignment& assignment, std::string_view name) {
    for (const auto& [key, value] : assignment)
        if (key == name) return value;
    return std::nullopt;
}

void ParamSpace::validate() const {
    if (axes.empty()) throw std::invalid_argument("parameter space has no axes");
    std::set<std::string> seen;
    for (const auto& axis : axes) {
        if (!seen.insert(axis.name).second) throw std::invalid_argument("duplicate axis '" + axis.name + "'");
        if (axis.continuous) {
            if (!(axis.lo < axis.hi) || !std::isfinite(axis.lo) || !std::isfinite(axis.hi))
                throw std::invalid_argument("axis '" + axis.name + "' needs finite lo < hi");
        } else {
            if (axis.values.empty()) throw std::invalid_argument("axis '" + axis.name + "' has no values");
            for (double v : axis.values)
                if (!std::isfinite(v)) throw std::invalid_argument("axis '" + axis.name + "' has a non-finite value");
        }
    }
}

bool ParamSpace::all_discrete() const {
    return std::none_of(axes.begin(), axes.end(), [](const ParamAxis& a) { return a.continuous; });
}

std::size_t ParamSpace::grid_size() const {
    std::size_t n = 1;
    for (const auto& axis : axes) {
        if (axis.continuous) throw std::invalid_argument("axis '" + axis.name + "' is continuous");
        n *= axis.values.size();
    }
    return axes.empty() ? 0 : n;
}

bool ParamSpace::contains(const Assignment& assignment) const {
    if (assignment.size() != axes.size()) return false;
    for (std::size_t i = 0; i < axes.size(); ++i)
        if (assignment[i].first != axes[i].name || !axes[i].contains(assignment[i].second)) return false;
    return true;
}

const ParamAxis* ParamSpace::axis(std::string_view name) const {
    for (const auto& a : axes)
        if (a.name == name) return &a;
    return nullptr;
}

void ParamSpace::set_axis(ParamAxis axis) {
    for (auto& a : axes)
        if (a.name == axis.name) {
            a = std::move(axis);
            return;
        }
    axes.push_back(std::move(axis));
}

ParamSpace default_space(ModelKind kind) {
    std::vector<double> rates, tens, units;
    for (int i = 1; i <= 9; ++i) rates.push_back(i / 10.0);
    for (int i = 1; i <= 10; ++i) tens.push_back(10.0 * i);
    for (int i = 1; i <= 10; ++i) units.push_back(i);

    ParamSpace space;
    space.model_kind = kind;
    space.axes.push_back(ParamAxis::discrete("learning_rate", rates));
    if (kind == ModelKind::rnn) {
        space.axes.push_back(ParamAxis::discrete("numepochs", tens));
        space.axes.push_back(ParamAxis::discrete("hidden_dim", units));
    } else {
        space.axes.push_back(ParamAxis::discrete("batch_size", tens));
        space.axes.push_back(ParamAxis::discrete("hidden_nodes", units));
    }
    return space;
}

const std::vector<std::string>& known_hyperparameters() {
    static const std::vector<std::string> names{"learning_rate", "batch_size",     "hidden_nodes",   "numepochs",
                                                "hidden_dim",    "hidden_dropout", "visible_dropout", "epochs"};
    return names;
}

namespace {

std::size_t as_count(const std::string& name, double v) {
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e9)
        throw std::invalid_argument(name + " must be a positive integer (got " + std::to_string(v) + ")");
    return static_cast<std::size_t>(v);
}

}  // namespace

TrainConfig apply_assignment(TrainConfig base, const Assignment& assignment) {
    for (const auto& [name, value] : assignment) {
        if (name == "learning_rate") {
            base.learning_rate = value;
        } else if (name == "batch_size") {
            base.batch_size = as_count(name, value);
        } else if (name == "hidden_nodes" || name == "hidden_dim") {
            const std::size_t width = as_count(name, value);
            if (base.hidden_dims.empty()) base.hidden_dims.push_back(width);
            for (auto& d : base.hidden_dims) d = width;
        } else if (name == "numepochs" || name == "epochs") {
            base.epochs = as_count(name, value);
        } else if (name == "hidden_dropout") {
            base.hidden_dropout = value;
        } else if (name == "visible_dropout") {
            base.visible_dropout = value;
        } else {
            throw std::invalid_argument("unknown hyperparameter '" + name + "'");
        }
    }
    return base;
}

}  // namespace dltune
