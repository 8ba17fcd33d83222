#include "dltune/search/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "dltune/common/rng.hpp"
#include "dltune/search/nelder_mead.hpp"

namespace dltune {

std::string to_string(TrialStatus status) {
    switch (status) {
        case TrialStatus::ok: return "ok";
        case TrialStatus::diverged: return "diverged";
        case TrialStatus::failed: return "failed";
    }
    return "failed";
}

TrialStatus parse_trial_status(std::string_view text) {
    if (text == "ok") return TrialStatus::ok;
    if (text == "diverged") return TrialStatus::diverged;
    if (text == "failed") return TrialStatus::failed;
    throw std::invalid_argument("unknown trial status '" + std::string(text) + "'");
}

std::string to_string(SearchStrategy strategy) {
    switch (strategy) {
        case SearchStrategy::none: return "none";
        case SearchStrategy::grid: return "grid";
        case SearchStrategy::random: return "random";
        case SearchStrategy::nelder_mead: return "nelder_mead";
        case SearchStrategy::lr_sweep: return "lr_sweep";
    }
    return "none";
}

SearchStrategy parse_search_strategy(std::string_view name) {
    std::string s(name);
    std::replace(s.begin(), s.end(), '-', '_');
    if (s == "none" || s == "baseline") return SearchStrategy::none;
    if (s == "grid") return SearchStrategy::grid;
    if (s == "random") return SearchStrategy::random;
    if (s == "nelder_mead") return SearchStrategy::nelder_mead;
    if (s == "lr_sweep") return SearchStrategy::lr_sweep;
    throw std::invalid_argument("unknown search strategy '" + std::string(name) + "'");
}

std::vector<Assignment> grid_assignments(const ParamSpace& space) {
    space.validate();
    const std::size_t total = space.grid_size();
    std::vector<Assignment> out;
    out.reserve(total);
    std::vector<std::size_t> digit(space.axes.size(), 0);
    for (std::size_t t = 0; t < total; ++t) {
        Assignment a;
        for (std::size_t i = 0; i < space.axes.size(); ++i)
            a.emplace_back(space.axes[i].name, space.axes[i].values[digit[i]]);
        out.push_back(std::move(a));
        for (std::size_t i = space.axes.size(); i-- > 0;) {
            if (++digit[i] < space.axes[i].values.size()) break;
            digit[i] = 0;
        }
    }
    return out;
}

std::vector<Assignment> random_assignments(const ParamSpace& space, std::size_t n, std::uint64_t seed) {
    space.validate();
    if (n == 0) throw std::invalid_argument("random search needs at least one trial");
    Rng rng(seed);
    std::vector<Assignment> out;
    out.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        Assignment a;
        for (const auto& axis : space.axes) {
            double v;
            if (!axis.continuous) {
                v = axis.values[rng.below(axis.values.size())];
            } else if (axis.integer) {
                const auto lo = static_cast<std::int64_t>(std::ceil(axis.lo));
                const auto hi = static_cast<std::int64_t>(std::floor(axis.hi));
                if (hi < lo) throw std::invalid_argument("integer axis '" + axis.name + "' holds no integer");
                v = static_cast<double>(lo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - lo) + 1)));
            } else {
                v = rng.uniform(axis.lo, axis.hi);
            }
            a.emplace_back(axis.name, v);
        }
        out.push_back(std::move(a));
    }
    return out;
}

namespace {

template <typename Result, typename Fn>
std::vector<Result> run_indexed(std::size_t n, std::size_t jobs, Fn&& fn) {
    std::vector<Result> results(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                results[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, n));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

SearchResult finish(std::vector<TrialResult> trials) {
    if (trials.empty()) throw std::invalid_argument("search produced no trials");
    SearchResult out;
    out.best = trials[best_index(trials)];
    out.trials = std::move(trials);
    return out;
}

}  // namespace

std::vector<TrialResult> evaluate_all(const std::vector<Assignment>& assignments, const Evaluator& evaluate,
                                      std::size_t jobs) {
    return run_indexed<TrialResult>(assignments.size(), jobs, [&](std::size_t i) {
        TrialResult r = evaluate(assignments[i], i);
        r.index = i;
        r.assignment = assignments[i];
        return r;
    });
}

std::size_t best_index(const std::vector<TrialResult>& trials) {
    if (trials.empty()) throw std::invalid_argument("no trials");
    std::size_t best = 0;
    for (std::size_t i = 1; i < trials.size(); ++i)
        if (trials[i].validation_accuracy > trials[best].validation_accuracy) best = i;
    return best;
}

SearchResult grid_search(const ParamSpace& space, const Evaluator& evaluate, std::size_t jobs) {
    if (!space.all_discrete()) throw std::invalid_argument("grid search needs discrete axes only");
    return finish(evaluate_all(grid_assignments(space), evaluate, jobs));
}

SearchResult random_search(const ParamSpace& space, std::size_t n_trials, std::uint64_t seed,
                           const Evaluator& evaluate, std::size_t jobs) {
    return finish(evaluate_all(random_assignments(space, n_trials, seed), evaluate, jobs));
}

SearchResult nelder_mead_search(const ParamSpace& space, std::size_t max_evals, const Evaluator& evaluate) {
    space.validate();
    if (max_evals == 0) throw std::invalid_argument("Nelder-Mead needs a positive evaluation budget");
    const std::size_t d = space.axes.size();
    NelderMeadOptions options;
    options.max_evals = max_evals;
    options.tolerance = 1e-9;
    std::vector<double> x0(d);
    for (std::size_t i = 0; i < d; ++i) {
        const auto& axis = space.axes[i];
        const double lo = axis.continuous ? axis.lo : 0.0;
        const double hi = axis.continuous ? axis.hi : static_cast<double>(axis.values.size() - 1);
        options.lower.push_back(lo);
        options.upper.push_back(hi);
        options.initial_step.push_back(hi > lo ? 0.25 * (hi - lo) : 1.0);
        x0[i] = axis.continuous ? 0.5 * (lo + hi) : std::floor(0.5 * hi);
    }
    auto to_assignment = [&](const std::vector<double>& x) {
        Assignment a;
        for (std::size_t i = 0; i < d; ++i) {
            const auto& axis = space.axes[i];
            double v;
            if (axis.continuous) {
                v = std::clamp(x[i], axis.lo, axis.hi);
                if (axis.integer) v = std::clamp(std::round(v), std::ceil(axis.lo), std::floor(axis.hi));
            } else {
                const auto k = static_cast<std::size_t>(std::clamp(std::round(x[i]), 0.0, options.upper[i]));
                v = axis.values[k];
            }
            a.emplace_back(axis.name, v);
        }
        return a;
    };

    std::vector<TrialResult> trials;
    auto objective = [&](const std::vector<double>& x) {
        if (trials.size() >= max_evals) return 1.0;
        const auto assignment = to_assignment(x);
        TrialResult r = evaluate(assignment, trials.size());
        r.index = trials.size();
        r.assignment = assignment;
        trials.push_back(r);
        return 1.0 - r.validation_accuracy;
    };
    nelder_mead(objective, x0, options);
    return finish(std::move(trials));
}

std::vector<double> default_lr_grid(std::size_t points, double lo, double hi) {
    if (points == 0) throw std::invalid_argument("learning-rate grid needs at least one point");
    if (points == 1) return {lo};
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    grid.back() = hi;
    return grid;
}

std::vector<LrCurvePoint> lr_sweep(const std::vector<double>& grid,
                                   const std::function<std::vector<double>(double, std::size_t)>& evaluate,
                                   std::size_t jobs) {
    if (grid.empty()) throw std::invalid_argument("learning-rate grid is empty");
    return run_indexed<LrCurvePoint>(grid.size(), jobs, [&](std::size_t i) {
        LrCurvePoint p;
        p.learning_rate = grid[i];
        p.samples = evaluate(grid[i], i);
        if (p.samples.empty()) throw std::invalid_argument("learning-rate evaluation returned no accuracies");
        double sum = 0.0;
        for (double s : p.samples) sum += s;
        p.mean_accuracy = sum / static_cast<double>(p.samples.size());
        return p;
    });
}

BudgetEstimate budget_estimate(const ParamSpace& space, const Budget& budget, SearchStrategy strategy) {
    if (budget.iterations == 0) throw std::invalid_argument("budget iterations must be positive");
    BudgetEstimate e;
    switch (strategy) {
        case SearchStrategy::grid: e.evaluations = space.grid_size(); break;
        case SearchStrategy::random:
        case SearchStrategy::nelder_mead: e.evaluations = budget.max_trials; break;
        case SearchStrategy::lr_sweep: {
            const auto* axis = space.axis("learning_rate");
            e.evaluations = axis && !axis->continuous ? axis->values.size() : budget.max_trials;
            break;
        }
        case SearchStrategy::none: e.evaluations = 1; break;
    }
    e.volume_per_iteration = static_cast<double>(budget.volume) / static_cast<double>(budget.iterations);
    e.relative_cost = static_cast<double>(e.evaluations) * e.volume_per_iteration;
    return e;
}

}  // namespace dltune
