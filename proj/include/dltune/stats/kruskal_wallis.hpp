#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dltune {

struct GroupSample {
    std::string label;
    std::vector<double> values;
};

struct KruskalWallisResult {
    double h = 0.0;
    std::size_t df = 0;
    double p_value = 1.0;
    bool reject = false;  // p < alpha: the groups do not share one distribution
};

/// Pooled midranks, H = 12/(N(N+1)) sum R_i^2/n_i - 3(N+1), divided by
/// 1 - sum(t^3 - t)/(N^3 - N) when tie_correction is on. p is the chi-square
/// upper tail with groups - 1 degrees of freedom. When every observation is
/// equal H is reported as 0 with p = 1.
KruskalWallisResult kruskal_wallis(const std::vector<GroupSample>& groups, bool tie_correction = true,
                                   double alpha = 0.05);

/// Regularized upper incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);
/// P(X > x) for X ~ chi-square(df).
double chi_square_sf(double x, double df);

/// Midranks (1-based) of values, ties sharing the mean of their positions.
std::vector<double> midranks(const std::vector<double>& values);

}  // namespace dltune
