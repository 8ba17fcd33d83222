#include "dltune/experiment/config.hpp"

#include <algorithm>
#include <filesystem>

#include <json.hpp>

#include "dltune/common/csv.hpp"

namespace dltune {
namespace {

using json = nlohmann::json;

std::string resolve(const std::string& base, const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_absolute()) return p.lexically_normal().string();
    return (std::filesystem::path(base) / p).lexically_normal().string();
}

ParamAxis parse_axis(const std::string& name, const json& j) {
    if (j.is_array()) {
        if (j.empty()) throw ConfigError("space axis '" + name + "' is empty");
        return ParamAxis::discrete(name, j.get<std::vector<double>>());
    }
    if (j.is_object()) {
        if (j.contains("values")) return ParamAxis::discrete(name, j.at("values").get<std::vector<double>>());
        return ParamAxis::interval(name, j.at("lo").get<double>(), j.at("hi").get<double>(), j.value("integer", false));
    }
    throw ConfigError("space axis '" + name + "' must be a list of values or {lo, hi}");
}

std::vector<ParamAxis> parse_axes(const json& j) {
    std::vector<ParamAxis> axes;
    const auto& known = known_hyperparameters();
    for (const auto& [name, value] : j.items()) {
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw ConfigError("unknown hyperparameter axis '" + name + "'");
        axes.push_back(parse_axis(name, value));
    }
    return axes;
}

StrategySpec parse_strategy(const json& j) {
    StrategySpec s;
    if (j.is_string()) {
        s.kind = parse_search_strategy(j.get<std::string>());
        return s;
    }
    s.kind = parse_search_strategy(j.at("name").get<std::string>());
    s.n_trials = j.value("n_trials", s.n_trials);
    s.max_evals = j.value("max_evals", s.max_evals);
    if (s.n_trials == 0 || s.max_evals == 0) throw ConfigError("strategy budgets must be positive");
    return s;
}

void parse_training(const json& j, TrainConfig& t) {
    for (const auto& [key, value] : j.items()) {
        if (key == "learning_rate") t.learning_rate = value.get<double>();
        else if (key == "batch_size") t.batch_size = value.get<std::size_t>();
        else if (key == "epochs") t.epochs = value.get<std::size_t>();
        else if (key == "hidden_dims") t.hidden_dims = value.get<std::vector<std::size_t>>();
        else if (key == "hidden_dropout") t.hidden_dropout = value.get<double>();
        else if (key == "visible_dropout") t.visible_dropout = value.get<double>();
        else if (key == "activation") t.activation = parse_activation(value.get<std::string>());
        else if (key == "max_epochs") t.stopping.max_epochs = value.get<std::size_t>();
        else if (key == "min_loss_delta") t.stopping.min_loss_delta = value.get<double>();
        else if (key == "patience") t.stopping.patience = value.get<std::size_t>();
        else if (key == "bptt_horizon") t.bptt_horizon = value.get<std::size_t>();
        else if (key == "strict_compression") t.strict_compression = value.get<bool>();
        else throw ConfigError("unknown training setting '" + key + "'");
    }
    if (t.epochs == 0) throw ConfigError("training.epochs must be at least 1");
    try {
        validate(t);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("training: ") + e.what());
    }
}

}  // namespace

std::vector<double> LrSweepSpec::grid() const {
    if (!values.empty()) return values;
    return default_lr_grid(points, lo, hi);
}

ParamSpace ExperimentConfig::space_for(ModelKind kind) const {
    ParamSpace space = default_space(kind);
    for (const auto& axis : space_overrides) space.set_axis(axis);
    if (auto it = model_space_overrides.find(kind); it != model_space_overrides.end())
        for (const auto& axis : it->second) space.set_axis(axis);
    space.validate();
    return space;
}

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig c;
    try {
        if (!doc.is_object()) throw ConfigError("config must be a JSON object");
        c.name = doc.value("name", std::string("experiment"));
        if (!doc.contains("seed")) throw ConfigError("config needs an explicit seed");
        c.seed = doc.at("seed").get<std::uint64_t>();

        for (const auto& d : doc.value("datasets", json::array())) {
            DatasetSpec ds;
            ds.path = resolve(base_dir, d.at("path").get<std::string>());
            ds.name = d.value("name", std::filesystem::path(ds.path).stem().string());
            ds.format = d.contains("format") ? parse_table_format(d.at("format").get<std::string>())
                                             : format_from_path(ds.path);
            if (d.contains("label")) {
                const auto& l = d.at("label");
                if (l.is_number_unsigned()) ds.label = l.get<std::size_t>();
                else ds.label = l.get<std::string>();
            }
            c.datasets.push_back(std::move(ds));
        }
        if (c.datasets.empty()) throw ConfigError("config lists no datasets");

        if (doc.contains("preprocessing")) {
            const auto& p = doc.at("preprocessing");
            const auto policy = p.value("factor_policy", std::string("level_index"));
            if (policy == "level_index") c.preprocessing.factor_policy = FactorPolicy::level_index();
            else if (policy == "seeded_permutation") c.preprocessing.factor_policy = FactorPolicy::seeded_permutation(c.seed);
            else throw ConfigError("unknown factor_policy '" + policy + "'");
            if (p.contains("normalize")) {
                const auto& n = p.at("normalize");
                c.normalize_variants = n.is_array() ? n.get<std::vector<bool>>() : std::vector<bool>{n.get<bool>()};
                if (c.normalize_variants.empty()) throw ConfigError("preprocessing.normalize list is empty");
            }
            c.preprocessing.exclude_label = p.value("exclude_label", true);
            c.preprocessing.sparsity_include_label = p.value("sparsity_include_label", true);
        }

        for (const auto& m : doc.value("models", json::array())) c.models.push_back(parse_model_kind(m.get<std::string>()));

        if (doc.contains("strategy")) {
            const auto& s = doc.at("strategy");
            if (s.is_array())
                for (const auto& e : s) c.strategies.push_back(parse_strategy(e));
            else
                c.strategies.push_back(parse_strategy(s));
        }
        c.baseline = doc.value("baseline", false);

        if (doc.contains("training")) parse_training(doc.at("training"), c.training);

        if (doc.contains("space")) {
            json shared = json::object();
            for (const auto& [key, value] : doc.at("space").items()) {
                bool is_model = true;
                ModelKind kind{};
                try {
                    kind = parse_model_kind(key);
                } catch (const std::invalid_argument&) {
                    is_model = false;
                }
                if (is_model) c.model_space_overrides[kind] = parse_axes(value);
                else shared[key] = value;
            }
            c.space_overrides = parse_axes(shared);
        }

        if (doc.contains("splits")) {
            const auto& s = doc.at("splits");
            const auto scheme = s.value("scheme", std::string("three_way"));
            if (scheme != "three_way")
                throw ConfigError("splits.scheme must be three_way (selection needs a validation part)");
            if (s.contains("seed")) c.split_seed = s.at("seed").get<std::uint64_t>();
            c.stratify = s.value("stratify", false);
        }

        if (doc.contains("lr_sweep")) {
            const auto& l = doc.at("lr_sweep");
            c.lr_sweep.values = l.value("values", std::vector<double>{});
            c.lr_sweep.points = l.value("points", c.lr_sweep.points);
            c.lr_sweep.lo = l.value("lo", c.lr_sweep.lo);
            c.lr_sweep.hi = l.value("hi", c.lr_sweep.hi);
            c.lr_sweep.folds = l.value("folds", c.lr_sweep.folds);
            c.lr_sweep.repeats = l.value("repeats", c.lr_sweep.repeats);
            if (c.lr_sweep.folds < 2 || c.lr_sweep.repeats < 1) throw ConfigError("lr_sweep needs folds >= 2 and repeats >= 1");
            if (c.lr_sweep.points == 0 || !(c.lr_sweep.lo < c.lr_sweep.hi)) throw ConfigError("lr_sweep grid is empty");
        }

        if (doc.contains("report")) {
            const auto& r = doc.at("report");
            c.report.stream = parse_accuracy_stream(r.value("stream", std::string("test")));
            c.report.tie_correction = r.value("tie_correction", true);
        }

        c.jobs = doc.value("jobs", std::size_t{1});
        c.output_dir = resolve(base_dir, doc.value("output_dir", std::string("out/") + c.name));

        for (auto kind : c.models) c.space_for(kind);
    } catch (const ConfigError&) {
        throw;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::exception& e) {
        throw ConfigError("cannot read config " + path + ": " + e.what());
    }
    return parse_experiment_config(text, std::filesystem::path(path).parent_path().string());
}

}  // namespace dltune
