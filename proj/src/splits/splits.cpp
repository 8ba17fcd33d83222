#include "dltune/splits/splits.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "dltune/common/rng.hpp"

namespace dltune {
namespace {

// A permutation of 0..n-1. With labels, each class is shuffled separately and
// the classes are interleaved by fractional position, so every prefix holds
// roughly the class proportions.
std::vector<std::size_t> permutation(std::size_t n, Rng& rng, const SplitOptions& options) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    if (!options.stratify_labels) {
        rng.shuffle(order);
        return order;
    }
    const auto labels = *options.stratify_labels;
    if (labels.size() != n) throw std::invalid_argument("stratify labels must have one entry per instance");
    std::map<double, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < n; ++i) by_class[labels[i]].push_back(i);
    struct Keyed {
        double position;
        std::size_t class_rank;
        std::size_t index;
    };
    std::vector<Keyed> keyed;
    std::size_t class_rank = 0;
    for (auto& [label, members] : by_class) {
        rng.shuffle(members);
        const double m = static_cast<double>(members.size());
        for (std::size_t k = 0; k < members.size(); ++k)
            keyed.push_back({(static_cast<double>(k) + 0.5) / m, class_rank, members[k]});
        ++class_rank;
    }
    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        if (a.position != b.position) return a.position < b.position;
        return a.class_rank < b.class_rank;
    });
    for (std::size_t i = 0; i < n; ++i) order[i] = keyed[i].index;
    return order;
}

}  // namespace

std::string to_string(SplitScheme scheme) {
    switch (scheme) {
        case SplitScheme::holdout_70_30: return "holdout_70_30";
        case SplitScheme::three_way_70_15_15: return "three_way_70_15_15";
        case SplitScheme::repeated_cv: return "repeated_cv";
    }
    return "unknown";
}

SplitPlan holdout(std::size_t n, std::uint64_t seed, const SplitOptions& options) {
    if (n < 2) throw std::invalid_argument("holdout needs at least 2 instances");
    Rng rng(seed);
    const auto order = permutation(n, rng, options);
    const std::size_t n_train = n * 7 / 10;
    SplitPlan plan;
    plan.seed = seed;
    plan.scheme = SplitScheme::holdout_70_30;
    plan.train.assign(order.begin(), order.begin() + n_train);
    plan.test.assign(order.begin() + n_train, order.end());
    return plan;
}

SplitPlan three_way(std::size_t n, std::uint64_t seed, const SplitOptions& options) {
    if (n < 3) throw std::invalid_argument("three-way split needs at least 3 instances");
    Rng rng(seed);
    const auto order = permutation(n, rng, options);
    const std::size_t n_train = n * 7 / 10;
    const std::size_t rest = n - n_train;
    const std::size_t n_val = (rest + 1) / 2;
    SplitPlan plan;
    plan.seed = seed;
    plan.scheme = SplitScheme::three_way_70_15_15;
    plan.train.assign(order.begin(), order.begin() + n_train);
    plan.validation.assign(order.begin() + n_train, order.begin() + n_train + n_val);
    plan.test.assign(order.begin() + n_train + n_val, order.end());
    return plan;
}

std::vector<SplitPlan> repeated_cv(std::size_t n, std::size_t folds, std::size_t repeats,
                                   std::uint64_t seed, const SplitOptions& options) {
    if (folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
    if (repeats < 1) throw std::invalid_argument("cross-validation needs at least 1 repeat");
    if (n < folds) throw std::invalid_argument("fewer instances than folds");
    std::vector<SplitPlan> plans;
    plans.reserve(folds * repeats);
    for (std::size_t rep = 0; rep < repeats; ++rep) {
        const std::uint64_t rep_seed = derive_seed(seed, rep);
        Rng rng(rep_seed);
        const auto order = permutation(n, rng, options);

        std::vector<std::vector<std::size_t>> parts(folds);
        if (options.stratify_labels) {
            // Deal class by class so every fold gets floor or ceil of each class.
            auto by_class = order;
            const auto labels = *options.stratify_labels;
            std::stable_sort(by_class.begin(), by_class.end(),
                             [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
            for (std::size_t i = 0; i < n; ++i) parts[i % folds].push_back(by_class[i]);
        } else {
            std::size_t pos = 0;
            for (std::size_t f = 0; f < folds; ++f) {
                const std::size_t len = n / folds + (f < n % folds ? 1 : 0);
                parts[f].assign(order.begin() + pos, order.begin() + pos + len);
                pos += len;
            }
        }
        for (std::size_t f = 0; f < folds; ++f) {
            SplitPlan plan;
            plan.seed = rep_seed;
            plan.scheme = SplitScheme::repeated_cv;
            plan.folds = folds;
            plan.repeats = repeats;
            plan.repeat = rep;
            plan.fold = f;
            plan.test = parts[f];
            for (std::size_t g = 0; g < folds; ++g)
                if (g != f) plan.train.insert(plan.train.end(), parts[g].begin(), parts[g].end());
            plans.push_back(std::move(plan));
        }
    }
    return plans;
}

std::vector<SplitPlan> repeated_cv_within(const SplitPlan& outer, std::size_t folds,
                                          std::size_t repeats, std::uint64_t seed) {
    auto plans = repeated_cv(outer.train.size(), folds, repeats, seed);
    for (auto& plan : plans) {
        for (auto& i : plan.train) i = outer.train[i];
        for (auto& i : plan.test) i = outer.train[i];
    }
    return plans;
}

std::string plan_to_json(const SplitPlan& plan) {
    nlohmann::ordered_json j;
    j["scheme"] = to_string(plan.scheme);
    j["seed"] = plan.seed;
    if (plan.scheme == SplitScheme::repeated_cv) {
        j["folds"] = plan.folds;
        j["repeats"] = plan.repeats;
        j["repeat"] = plan.repeat;
        j["fold"] = plan.fold;
    }
    j["train"] = plan.train;
    j["validation"] = plan.validation;
    j["test"] = plan.test;
    return j.dump();
}

SplitPlan plan_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    SplitPlan plan;
    const auto scheme = j.at("scheme").get<std::string>();
    if (scheme == "holdout_70_30") plan.scheme = SplitScheme::holdout_70_30;
    else if (scheme == "three_way_70_15_15") plan.scheme = SplitScheme::three_way_70_15_15;
    else if (scheme == "repeated_cv") plan.scheme = SplitScheme::repeated_cv;
    else throw std::invalid_argument("unknown split scheme '" + scheme + "'");
    plan.seed = j.at("seed").get<std::uint64_t>();
    plan.train = j.at("train").get<std::vector<std::size_t>>();
    plan.validation = j.at("validation").get<std::vector<std::size_t>>();
    plan.test = j.at("test").get<std::vector<std::size_t>>();
    if (plan.scheme == SplitScheme::repeated_cv) {
        plan.folds = j.at("folds").get<std::size_t>();
        plan.repeats = j.at("repeats").get<std::size_t>();
        plan.repeat = j.at("repeat").get<std::size_t>();
        plan.fold = j.at("fold").get<std::size_t>();
    }
    return plan;
}

void check_partition(const SplitPlan& plan, std::size_t n) {
    std::vector<int> seen(n, 0);
    for (const auto* part : {&plan.train, &plan.validation, &plan.test})
        for (auto i : *part) {
            if (i >= n) throw std::logic_error("split index out of range");
            if (seen[i]++) throw std::logic_error("split index appears twice");
        }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw std::logic_error("split does not cover every index");
}

}  // namespace dltune
