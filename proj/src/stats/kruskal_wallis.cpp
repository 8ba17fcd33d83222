#include "dltune/stats/kruskal_wallis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dltune {
namespace {

double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 1000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz's method for the continued fraction of Q(a, x).
double gamma_q_fraction(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("gamma shape must be positive");
    if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_fraction(a, x);
}

double chi_square_sf(double x, double df) {
    if (!(df > 0.0)) throw std::invalid_argument("chi-square degrees of freedom must be positive");
    return regularized_gamma_q(0.5 * df, 0.5 * x);
}

std::vector<double> midranks(const std::vector<double>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

KruskalWallisResult kruskal_wallis(const std::vector<GroupSample>& groups, bool tie_correction, double alpha) {
    if (groups.size() < 2) throw std::invalid_argument("Kruskal-Wallis needs at least two groups");
    std::vector<double> pooled;
    for (const auto& g : groups) {
        if (g.values.empty()) throw std::invalid_argument("group '" + g.label + "' is empty");
        for (double v : g.values) {
            if (!std::isfinite(v)) throw std::invalid_argument("group '" + g.label + "' has a non-finite value");
            pooled.push_back(v);
        }
    }
    KruskalWallisResult out;
    out.df = groups.size() - 1;
    const double n = static_cast<double>(pooled.size());
    const auto ranks = midranks(pooled);

    double ties = 0.0;
    {
        auto sorted = pooled;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size();) {
            std::size_t j = i;
            while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i);
            ties += t * t * t - t;
            i = j;
        }
    }
    const double correction = 1.0 - ties / (n * n * n - n);
    if (correction <= 0.0) return out;  // every observation equal

    double sum = 0.0;
    std::size_t pos = 0;
    for (const auto& g : groups) {
        double r = 0.0;
        for (std::size_t i = 0; i < g.values.size(); ++i) r += ranks[pos++];
        sum += r * r / static_cast<double>(g.values.size());
    }
    double h = 12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0);
    if (tie_correction) h /= correction;
    out.h = std::max(0.0, h);
    out.p_value = chi_square_sf(out.h, static_cast<double>(out.df));
    out.reject = out.p_value < alpha;
    return out;
}

}  // namespace dltune
