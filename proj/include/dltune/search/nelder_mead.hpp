#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace dltune {

struct NelderMeadOptions {
    // Stop once max |f_i - f_best| and max |x_i - x_best| over the simplex
    // both fall below these. Either alone can stall on symmetric simplices.
    double tolerance = 1e-8;
    double x_tolerance = 1e-6;
    std::size_t max_evals = 1000;
    /// Per-coordinate initial step; empty means 0.1 * max(1, |x0_i|).
    std::vector<double> initial_step;
    /// Optional box; points are clamped into it before evaluation.
    std::vector<double> lower;
    std::vector<double> upper;
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Reflection 1, expansion 2, contraction 1/2, shrink 1/2. Throws
/// std::invalid_argument if x0 is empty, non-finite, or f(x0) is not finite.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> x0, const NelderMeadOptions& options = {});

}  // namespace dltune
