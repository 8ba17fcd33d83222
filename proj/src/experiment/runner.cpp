#include "dltune/experiment/runner.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <mutex>

#include <json.hpp>

#include "dltune/common/csv.hpp"
#include "dltune/common/rng.hpp"
#include "dltune/experiment/evaluate.hpp"
#include "dltune/nn/tabular.hpp"
#include "dltune/search/trial_log.hpp"
#include "dltune/stats/kruskal_wallis.hpp"
#include "dltune/stats/report.hpp"

namespace dltune {
namespace {

namespace fs = std::filesystem;

struct PreparedDataset {
    std::string name;
    DataTable raw;         // factors converted, not normalized
    DataTable normalized;  // raw after min-max
    double sparsity = 0.0;
};

std::optional<PreparedDataset> prepare(const DatasetSpec& spec, const ExperimentConfig& config, std::ostream& log) {
    try {
        DataTable table = load_table(spec.path, spec.format, spec.label);
        table.name = spec.name;
        PreprocessOptions options = config.preprocessing;
        options.normalize = false;
        auto result = preprocess_all({table}, options, config.seed);
        PreparedDataset d{spec.name, std::move(result.tables.front()), {}, result.sparsity.front()};
        d.normalized = minmax_normalize(d.raw, config.preprocessing.exclude_label);
        return d;
    } catch (const std::exception& e) {
        log << "error: dataset " << spec.name << " (" << spec.path << "): " << e.what() << "\n";
        return std::nullopt;
    }
}

void require_models(const ExperimentConfig& config) {
    if (config.models.empty()) throw ConfigError("config lists no models");
}

}  // namespace

void apply_overrides(ExperimentConfig& config, const RunOverrides& o) {
    if (o.seed) {
        config.seed = *o.seed;
        if (config.preprocessing.factor_policy.kind == FactorPolicy::Kind::seeded_permutation)
            config.preprocessing.factor_policy.seed = *o.seed;
    }
    if (o.jobs) config.jobs = *o.jobs;
    if (o.output_dir) config.output_dir = *o.output_dir;
    if (o.strategy) {
        SearchStrategy kind;
        try {
            kind = parse_search_strategy(*o.strategy);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        StrategySpec chosen;
        chosen.kind = kind;
        for (const auto& s : config.strategies)
            if (s.kind == kind) chosen = s;
        config.strategies = {chosen};
    }
    if (config.jobs == 0) config.jobs = 1;
}

std::uint64_t trial_seed(std::uint64_t master, const std::string& dataset, const std::string& model,
                         std::size_t index) {
    return derive_seed(derive_seed(derive_seed(master, dataset), model), static_cast<std::uint64_t>(index));
}

int cmd_profile(const ExperimentConfig& config, std::ostream& log) {
    const fs::path out(config.output_dir);
    fs::create_directories(out / "profiles");
    std::string csv = "dataset,sparsity,sparsity_without_label,n_instances,n_features,class_uniformity\n";
    int code = exit_ok;
    for (const auto& spec : config.datasets) {
        auto d = prepare(spec, config, log);
        if (!d) {
            code = exit_partial_failure;
            continue;
        }
        auto p = profile(d->raw, config.preprocessing.sparsity_include_label);
        p.name = d->name;
        write_text_file((out / "profiles" / (d->name + ".json")).string(), profile_json(p) + "\n");
        csv += join_csv({d->name, format_double(sparsity(d->raw, true)), format_double(sparsity(d->raw, false)),
                         std::to_string(p.n_instances), std::to_string(p.n_features), format_double(p.class_uniformity)}) +
               "\n";
        log << "profiled " << d->name << ": sparsity " << format_double(p.sparsity) << "\n";
    }
    write_text_file((out / "sparsity.csv").string(), csv);
    return code;
}

int cmd_tune(const ExperimentConfig& config, std::ostream& log) {
    require_models(config);
    if (config.strategies.empty() && !config.baseline) throw ConfigError("config names no strategy");
    for (const auto& s : config.strategies)
        if (s.kind == SearchStrategy::lr_sweep) throw ConfigError("lr_sweep runs through the sweep-lr command");
        else if (s.kind == SearchStrategy::grid)
            for (auto kind : config.models)
                if (!config.space_for(kind).all_discrete())
                    throw ConfigError("grid search needs discrete axes for " + to_string(kind));

    const fs::path out(config.output_dir);
    fs::create_directories(out / "splits");
    int code = exit_ok;
    std::vector<TrialRecord> records;

    for (const auto& spec : config.datasets) {
        auto d = prepare(spec, config, log);
        if (!d) {
            code = exit_partial_failure;
            continue;
        }
        const std::uint64_t split_seed = config.split_seed.value_or(derive_seed(config.seed, "split/" + d->name));
        SplitOptions split_options;
        const auto labels = d->raw.labels();
        if (config.stratify) split_options.stratify_labels = std::span<const double>(labels);
        const SplitPlan plan = three_way(d->raw.rows(), split_seed, split_options);
        write_text_file((out / "splits" / (d->name + ".json")).string(), plan_to_json(plan));

        for (bool normalized : config.normalize_variants) {
            const DataTable& table = normalized ? d->normalized : d->raw;
            for (auto kind : config.models) {
                const std::string model = to_string(kind);
                const ParamSpace space = config.space_for(kind);
                auto evaluator = [&](const Assignment& a, std::size_t i) {
                    return run_trial(kind, table, plan, config.training, a, trial_seed(config.seed, d->name, model, i));
                };
                auto record = [&](const std::string& strategy, std::vector<TrialResult>& trials) {
                    std::size_t bad = 0;
                    for (auto& t : trials) {
                        if (t.status != TrialStatus::ok) ++bad;
                        records.push_back({strategy, d->name, model, normalized,
                                           trial_seed(config.seed, d->name, model, t.index), std::move(t)});
                    }
                    log << d->name << (normalized ? " [normalized] " : " [original] ") << model << " " << strategy << ": "
                        << trials.size() << " trials";
                    if (bad) log << ", " << bad << " not ok";
                    log << "\n";
                };
                if (config.baseline) {
                    std::vector<TrialResult> one{evaluator({}, 0)};
                    record("none", one);
                }
                for (const auto& s : config.strategies) {
                    SearchResult result;
                    switch (s.kind) {
                        case SearchStrategy::grid: result = grid_search(space, evaluator, config.jobs); break;
                        case SearchStrategy::random:
                            result = random_search(space, s.n_trials,
                                                   derive_seed(config.seed, "random/" + d->name + "/" + model), evaluator,
                                                   config.jobs);
                            break;
                        case SearchStrategy::nelder_mead: result = nelder_mead_search(space, s.max_evals, evaluator); break;
                        case SearchStrategy::none: {
                            result.trials.push_back(evaluator({}, 0));
                            break;
                        }
                        case SearchStrategy::lr_sweep: break;
                    }
                    record(to_string(s.kind), result.trials);
                }
            }
        }
    }

    const std::string log_text = format_trial_log(records);
    write_text_file((out / "trials.csv").string(), log_text);
    write_text_file((out / "trials.times.csv").string(), format_trial_times(records));
    auto reread = parse_trial_log(log_text);
    attach_trial_times(reread, format_trial_times(records));
    write_report(reread, out.string(), config.report);
    log << "wrote " << records.size() << " trials to " << (out / "trials.csv").string() << "\n";
    return code;
}

int cmd_sweep_lr(const ExperimentConfig& config, std::ostream& log) {
    require_models(config);
    const auto grid = config.lr_sweep.grid();
    const fs::path out(config.output_dir);
    fs::create_directories(out);
    int code = exit_ok;
    nlohmann::ordered_json tests = nlohmann::ordered_json::array();

    for (const auto& spec : config.datasets) {
        auto d = prepare(spec, config, log);
        if (!d) {
            code = exit_partial_failure;
            continue;
        }
        const std::uint64_t split_seed = config.split_seed.value_or(derive_seed(config.seed, "split/" + d->name));
        const auto plans = repeated_cv(d->raw.rows(), config.lr_sweep.folds, config.lr_sweep.repeats, split_seed);
        for (bool normalized : config.normalize_variants) {
            const DataTable& table = normalized ? d->normalized : d->raw;
            const std::string stem = d->name + (normalized ? ".normalized" : "");
            std::vector<GroupSample> groups;
            for (auto kind : config.models) {
                const std::string model = to_string(kind);
                std::size_t bad = 0;
                std::mutex bad_mutex;
                auto curve = lr_sweep(
                    grid,
                    [&](double lr, std::size_t i) {
                        std::vector<double> accs;
                        for (std::size_t p = 0; p < plans.size(); ++p) {
                            auto r = run_trial(kind, table, plans[p], config.training, {{"learning_rate", lr}},
                                               derive_seed(trial_seed(config.seed, d->name, model, i), p));
                            if (r.status != TrialStatus::ok) {
                                std::lock_guard lock(bad_mutex);
                                ++bad;
                            }
                            accs.push_back(r.test_accuracy);
                        }
                        return accs;
                    },
                    config.jobs);
                std::string csv = "learning_rate,mean_accuracy,std,n\n";
                GroupSample g{model, {}};
                for (const auto& point : curve) {
                    double ss = 0.0;
                    for (double s : point.samples) ss += (s - point.mean_accuracy) * (s - point.mean_accuracy);
                    const double sd = point.samples.size() > 1 ? std::sqrt(ss / static_cast<double>(point.samples.size() - 1)) : 0.0;
                    csv += join_csv({format_double(point.learning_rate), format_double(point.mean_accuracy), format_double(sd),
                                     std::to_string(point.samples.size())}) +
                           "\n";
                    g.values.push_back(point.mean_accuracy);
                }
                write_text_file((out / (stem + "." + model + ".curve.csv")).string(), csv);
                groups.push_back(std::move(g));
                log << stem << " " << model << ": " << curve.size() << " learning rates x " << plans.size() << " plans";
                if (bad) log << ", " << bad << " trainings not ok";
                log << "\n";
            }
            nlohmann::ordered_json t;
            t["dataset"] = d->name;
            t["normalized"] = normalized;
            nlohmann::ordered_json labels = nlohmann::ordered_json::array();
            for (const auto& g : groups) labels.push_back(g.label);
            t["groups"] = labels;
            if (groups.size() < 2) {
                t["skipped"] = "Kruskal-Wallis needs at least two models";
            } else {
                const auto kw = kruskal_wallis(groups, config.report.tie_correction);
                t["h"] = kw.h;
                t["df"] = kw.df;
                t["p_value"] = kw.p_value;
                t["reject"] = kw.reject;
            }
            tests.push_back(std::move(t));
        }
    }
    write_text_file((out / "kruskal_wallis.json").string(), tests.dump(2) + "\n");
    return code;
}

int cmd_report(const std::vector<std::string>& logs, const std::string& out_dir, const ReportOptions& options,
               std::ostream& log) {
    if (logs.empty()) throw ConfigError("report needs at least one trial log");
    std::vector<TrialRecord> merged;
    for (const auto& path : logs) {
        auto records = read_trial_log(path);
        log << "read " << records.size() << " trials from " << path << "\n";
        merged.insert(merged.end(), std::make_move_iterator(records.begin()), std::make_move_iterator(records.end()));
    }
    fs::create_directories(out_dir);
    write_text_file((fs::path(out_dir) / "trials.csv").string(), format_trial_log(merged));
    write_text_file((fs::path(out_dir) / "trials.times.csv").string(), format_trial_times(merged));
    write_report(merged, out_dir, options);
    return exit_ok;
}

}  // namespace dltune
