#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dltune/data/io.hpp"
#include "dltune/experiment/config.hpp"
#include "dltune/experiment/evaluate.hpp"
#include "dltune/experiment/runner.hpp"
#include "dltune/search/trial_log.hpp"
#include "support.hpp"

using namespace dltune;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t data_lines(const std::string& csv) {
    std::size_t n = 0;
    for (char c : csv) n += c == '\n';
    return n - 1;
}

// Scratch directory with two small blob datasets.
struct Workspace {
    fs::path root;
    explicit Workspace(const std::string& tag) : root(fs::temp_directory_path() / ("dltune-" + tag)) {
        fs::remove_all(root);
        fs::create_directories(root);
        write("blobs_a.csv", write_csv(testing_support::blobs(200, 3, 1, 0.15)));
        write("blobs_b.csv", write_csv(testing_support::blobs(200, 4, 2, 0.15)));
    }
    ~Workspace() { fs::remove_all(root); }
    void write(const std::string& name, const std::string& text) const { std::ofstream(root / name) << text; }
    ExperimentConfig config(json doc) const {
        json base = {{"name", "t"},
                     {"seed", 7},
                     {"datasets",
                      {{{"name", "a"}, {"path", "blobs_a.csv"}, {"label", "y"}},
                       {{"name", "b"}, {"path", "blobs_b.csv"}, {"label", "y"}}}},
                     {"models", {"FFNN"}},
                     {"training", {{"epochs", 2}, {"hidden_dims", {3}}}},
                     {"output_dir", "out"}};
        base.merge_patch(doc);
        return parse_experiment_config(base.dump(), root.string());
    }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config errors") {
    auto bad = [](const std::string& text) { CHECK_THROWS_AS(parse_experiment_config(text), ConfigError); };
    bad("{not json");
    bad(R"({"datasets": [{"name": "x", "path": "x.csv"}], "models": ["FFNN"]})");
    bad(R"({"seed": 1, "datasets": [], "models": ["FFNN"]})");
    bad(R"({"seed": 1, "datasets": [{"name": "x", "path": "x.csv"}], "models": ["CNN"]})");
    bad(R"({"seed": 1, "datasets": [{"name": "x", "path": "x.csv"}], "models": ["FFNN"], "strategy": "anneal"})");
    bad(R"({"seed": 1, "datasets": [{"name": "x", "path": "x.csv"}], "models": ["FFNN"], "space": {"momentum": [1]}})");
    bad(R"({"seed": 1, "datasets": [{"name": "x", "path": "x.csv"}], "models": ["FFNN"], "splits": {"scheme": "holdout"}})");
    bad(R"({"seed": 1, "datasets": [{"name": "x", "path": "x.csv"}], "models": ["FFNN"], "training": {"epochz": 3}})");
    CHECK_THROWS_AS(load_experiment_config("/nonexistent/config.json"), ConfigError);

    auto c = parse_experiment_config(
        R"({"seed": 1, "datasets": [{"name": "x", "path": "d/x.arff"}], "models": ["FFNN", "RNN"],
            "strategy": [{"name": "random", "n_trials": 5}, "grid"], "space": {"batch_size": [5], "RNN": {"hidden_dim": [2, 3]}},
            "output_dir": "o"})",
        "/base");
    CHECK(c.datasets[0].path == "/base/d/x.arff");
    CHECK(c.datasets[0].format == TableFormat::arff);
    CHECK(c.output_dir == "/base/o");
    CHECK(c.strategies.size() == 2);
    CHECK(c.strategies[0].n_trials == 5);
    CHECK(c.space_for(ModelKind::ffnn).grid_size() == 90);
    CHECK(c.space_for(ModelKind::rnn).grid_size() == 2 * 10 * 9);

    RunOverrides o;
    o.seed = 99;
    o.strategy = "random";
    o.jobs = 3;
    apply_overrides(c, o);
    CHECK(c.seed == 99);
    CHECK(c.jobs == 3);
    REQUIRE(c.strategies.size() == 1);
    CHECK(c.strategies[0].kind == SearchStrategy::random);
    o.strategy = "simulated-annealing";
    CHECK_THROWS_AS(apply_overrides(c, o), ConfigError);
}

TEST_CASE("trial seeds") {
    CHECK(trial_seed(1, "a", "FFNN", 0) == trial_seed(1, "a", "FFNN", 0));
    CHECK(trial_seed(1, "a", "FFNN", 0) != trial_seed(1, "a", "FFNN", 1));
    CHECK(trial_seed(1, "a", "FFNN", 0) != trial_seed(1, "a", "RNN", 0));
    CHECK(trial_seed(1, "a", "FFNN", 0) != trial_seed(1, "b", "FFNN", 0));
    CHECK(trial_seed(1, "a", "FFNN", 0) != trial_seed(2, "a", "FFNN", 0));
}

TEST_CASE("run_trial records divergence and failures") {
    auto data = testing_support::blobs(60, 2, 3);
    auto plan = three_way(60, 1);
    TrainConfig base;
    base.activation = Activation::linear;
    base.epochs = 5;
    auto diverged = run_trial(ModelKind::ffnn, data, plan, base, {{"learning_rate", 1e200}}, 1);
    CHECK(diverged.status == TrialStatus::diverged);
    CHECK(diverged.test_accuracy == 0.0);
    auto failed = run_trial(ModelKind::ffnn, data, plan, base, {{"batch_size", 1000}}, 1);
    CHECK(failed.status == TrialStatus::failed);
    CHECK_FALSE(failed.message.empty());

    DataTable wide = data;
    for (std::size_t i = 0; i < wide.rows(); ++i) wide.at(i, 0) *= 50.0;
    auto dbn = run_trial(ModelKind::dbn, wide, plan, TrainConfig{}, {}, 1);
    CHECK(dbn.status == TrialStatus::failed);
    auto ok = run_trial(ModelKind::dbn, data, plan, TrainConfig{}, {}, 1);
    CHECK(ok.status == TrialStatus::ok);
    CHECK(ok.epochs_run == 10);
    CHECK(ok.wall_time > 0.0);
}

TEST_CASE("profile reports unreadable datasets") {
    Workspace ws("profile");
    auto c = ws.config(json::object());
    c.datasets.push_back({"missing", (ws.root / "nope.csv").string(), TableFormat::csv, std::string("y")});
    std::ostringstream log;
    CHECK(cmd_profile(c, log) == exit_partial_failure);
    CHECK(log.str().find("missing") != std::string::npos);
    const auto csv = slurp(ws.root / "out" / "sparsity.csv");
    CHECK(data_lines(csv) == 2);
    CHECK(fs::exists(ws.root / "out" / "profiles" / "a.json"));
    c.datasets.pop_back();
    CHECK(cmd_profile(c, log) == exit_ok);
}

TEST_CASE("tune writes one row per trial and reruns identically") {
    Workspace ws("tune");
    auto c = ws.config({{"models", {"FFNN", "SAE"}}, {"strategy", {{"name", "random"}, {"n_trials", 10}}}, {"jobs", 2}});
    std::ostringstream log;
    REQUIRE(cmd_tune(c, log) == exit_ok);
    const auto first = slurp(ws.root / "out" / "trials.csv");
    CHECK(data_lines(first) == 40);
    const auto recs = parse_trial_log(first);
    for (const auto& r : recs) CHECK(r.result.status == TrialStatus::ok);
    CHECK(data_lines(slurp(ws.root / "out" / "trials.times.csv")) == 40);
    for (const char* f : {"summary.json", "boxdata.csv", "ranking.csv", "timing.csv", "splits/a.json", "splits/b.json"})
        CHECK(fs::exists(ws.root / "out" / f));

    c.jobs = 1;
    REQUIRE(cmd_tune(c, log) == exit_ok);
    CHECK(slurp(ws.root / "out" / "trials.csv") == first);
}

TEST_CASE("tune enumerates the full default grid") {
    Workspace ws("grid");
    auto c = ws.config({{"training", {{"epochs", 1}, {"hidden_dims", {2}}}}, {"strategy", "grid"}});
    c.datasets.pop_back();
    std::ostringstream log;
    REQUIRE(cmd_tune(c, log) == exit_ok);
    const auto recs = read_trial_log((ws.root / "out" / "trials.csv").string());
    REQUIRE(recs.size() == 900);
    CHECK(recs[0].result.assignment == Assignment{{"learning_rate", 0.1}, {"batch_size", 10}, {"hidden_nodes", 1}});
    CHECK(recs[899].result.index == 899);
}

TEST_CASE("baseline and report merge") {
    Workspace ws("report");
    auto c = ws.config({{"baseline", true}, {"strategy", {{"name", "random"}, {"n_trials", 3}}}});
    std::ostringstream log;
    REQUIRE(cmd_tune(c, log) == exit_ok);
    const auto log_path = (ws.root / "out" / "trials.csv").string();
    const auto recs = read_trial_log(log_path);
    CHECK(recs.size() == 2 * 4);
    std::size_t baselines = 0;
    for (const auto& r : recs) baselines += r.strategy == "none";
    CHECK(baselines == 2);

    const auto merged = (ws.root / "merged").string();
    CHECK(cmd_report({log_path, log_path}, merged, {}, log) == exit_ok);
    CHECK(read_trial_log(merged + "/trials.csv").size() == 16);
    CHECK(fs::exists(merged + "/summary.json"));
    CHECK_THROWS(cmd_report({(ws.root / "none.csv").string()}, merged, {}, log));
}

TEST_CASE("sweep-lr curves") {
    Workspace ws("sweep");
    auto c = ws.config({{"lr_sweep", {{"points", 4}, {"folds", 3}, {"repeats", 2}}}});
    c.datasets.pop_back();
    std::ostringstream log;
    REQUIRE(cmd_sweep_lr(c, log) == exit_ok);
    const auto curve = slurp(ws.root / "out" / "a.normalized.FFNN.curve.csv");
    CHECK(curve.rfind("learning_rate,mean_accuracy,std,n\n", 0) == 0);
    CHECK(data_lines(curve) == 4);
    auto kw = json::parse(slurp(ws.root / "out" / "kruskal_wallis.json"));
    CHECK(kw[0].contains("skipped"));

    c.models = {ModelKind::ffnn, ModelKind::rnn};
    REQUIRE(cmd_sweep_lr(c, log) == exit_ok);
    kw = json::parse(slurp(ws.root / "out" / "kruskal_wallis.json"));
    CHECK(kw[0]["df"] == 1);
    CHECK(fs::exists(ws.root / "out" / "a.normalized.RNN.curve.csv"));
}

}
