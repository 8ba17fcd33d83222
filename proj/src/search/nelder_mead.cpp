#include "dltune/search/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dltune {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> x0, const NelderMeadOptions& options) {
    const std::size_t d = x0.size();
    if (d == 0) throw std::invalid_argument("nelder_mead needs at least one coordinate");
    for (double v : x0)
        if (!std::isfinite(v)) throw std::invalid_argument("nelder_mead start point is not finite");
    const bool boxed = !options.lower.empty() || !options.upper.empty();
    if (boxed && (options.lower.size() != d || options.upper.size() != d))
        throw std::invalid_argument("nelder_mead box bounds must match the dimension");
    if (!options.initial_step.empty() && options.initial_step.size() != d)
        throw std::invalid_argument("nelder_mead initial step must match the dimension");

    auto clamp = [&](std::vector<double>& x) {
        if (!boxed) return;
        for (std::size_t i = 0; i < d; ++i) x[i] = std::clamp(x[i], options.lower[i], options.upper[i]);
    };
    std::size_t evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        const double f = objective(x);
        return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
    };

    clamp(x0);
    std::vector<std::vector<double>> simplex{x0};
    std::vector<double> fv{eval(x0)};
    if (!std::isfinite(fv[0])) throw std::invalid_argument("objective is not finite at the start point");

    for (std::size_t i = 0; i < d && evals < options.max_evals; ++i) {
        auto x = x0;
        const double step = options.initial_step.empty() ? 0.1 * std::max(1.0, std::abs(x0[i])) : options.initial_step[i];
        x[i] += step;
        clamp(x);
        if (x[i] == x0[i]) {
            x[i] = x0[i] - step;
            clamp(x);
        }
        fv.push_back(eval(x));
        simplex.push_back(std::move(x));
    }

    std::vector<std::size_t> order(simplex.size());
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> s;
        std::vector<double> f;
        for (auto i : order) {
            s.push_back(std::move(simplex[i]));
            f.push_back(fv[i]);
        }
        simplex = std::move(s);
        fv = std::move(f);
    };

    bool converged = false;
    while (true) {
        sort_simplex();
        double spread = 0.0;
        for (std::size_t k = 1; k < simplex.size(); ++k)
            for (std::size_t i = 0; i < d; ++i) spread = std::max(spread, std::abs(simplex[k][i] - simplex[0][i]));
        if (simplex.size() == d + 1 && fv.back() - fv.front() < options.tolerance && spread < options.x_tolerance) {
            converged = true;
            break;
        }
        if (evals >= options.max_evals || simplex.size() < d + 1) break;

        std::vector<double> centroid(d, 0.0);
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t i = 0; i < d; ++i) centroid[i] += simplex[k][i] / static_cast<double>(d);
        auto along = [&](double t) {
            std::vector<double> x(d);
            for (std::size_t i = 0; i < d; ++i) x[i] = centroid[i] + t * (simplex[d][i] - centroid[i]);
            clamp(x);
            return x;
        };

        auto xr = along(-1.0);
        const double fr = eval(xr);
        if (fr < fv[0]) {
            if (evals < options.max_evals) {
                auto xe = along(-2.0);
                const double fe = eval(xe);
                if (fe < fr) {
                    simplex[d] = std::move(xe);
                    fv[d] = fe;
                    continue;
                }
            }
            simplex[d] = std::move(xr);
            fv[d] = fr;
            continue;
        }
        if (fr < fv[d - 1]) {
            simplex[d] = std::move(xr);
            fv[d] = fr;
            continue;
        }
        if (evals >= options.max_evals) break;
        const bool outside = fr < fv[d];
        auto xc = along(outside ? -0.5 : 0.5);
        const double fc = eval(xc);
        if (fc < (outside ? fr : fv[d])) {
            simplex[d] = std::move(xc);
            fv[d] = fc;
            continue;
        }
        for (std::size_t k = 1; k <= d && evals < options.max_evals; ++k) {
            for (std::size_t i = 0; i < d; ++i) simplex[k][i] = simplex[0][i] + 0.5 * (simplex[k][i] - simplex[0][i]);
            clamp(simplex[k]);
            fv[k] = eval(simplex[k]);
        }
    }

    sort_simplex();
    return {simplex.front(), fv.front(), evals, converged};
}

}  // namespace dltune
