#include <doctest.h>

#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>

#include "dltune/common/csv.hpp"
#include "dltune/search/nelder_mead.hpp"
#include "dltune/search/search.hpp"
#include "dltune/search/space.hpp"
#include "dltune/search/trial_log.hpp"

using namespace dltune;

namespace {

std::set<std::vector<double>> as_points(const std::vector<Assignment>& list) {
    std::set<std::vector<double>> out;
    for (const auto& a : list) {
        std::vector<double> p;
        for (const auto& kv : a) p.push_back(kv.second);
        out.insert(p);
    }
    return out;
}

// Accuracy is a fixed function of the assignment, so the best point is known.
Evaluator peaked_evaluator(double lr_peak) {
    return [lr_peak](const Assignment& a, std::size_t index) {
        TrialResult r;
        r.index = index;
        r.assignment = a;
        r.validation_accuracy = 1.0 - std::abs(*find_value(a, "learning_rate") - lr_peak);
        r.test_accuracy = r.validation_accuracy;
        return r;
    };
}

TrialRecord sample_record(std::size_t i) {
    TrialRecord rec;
    rec.strategy = "random";
    rec.dataset = "wdbc";
    rec.model = "FFNN";
    rec.normalized = i % 2 == 1;
    rec.seed = 1234567890123ULL + i;
    rec.result.index = i;
    rec.result.assignment = {{"learning_rate", 0.1 * static_cast<double>(i + 1)}, {"batch_size", 20}};
    rec.result.validation_accuracy = 0.625 + 0.001 * static_cast<double>(i);
    rec.result.test_accuracy = 1.0 / 3.0;
    rec.result.epochs_run = 10;
    rec.result.wall_time = 0.25 * static_cast<double>(i);
    rec.result.status = i == 2 ? TrialStatus::failed : TrialStatus::ok;
    rec.result.message = i == 2 ? "bad, \"quoted\" input" : "";
    return rec;
}

}  // namespace

TEST_SUITE("search") {

TEST_CASE("default grid is the full 9 x 10 x 10 product") {
    for (auto kind : {ModelKind::ffnn, ModelKind::sae, ModelKind::dbn, ModelKind::rnn}) {
        const auto space = default_space(kind);
        CHECK(space.grid_size() == 900);
        const auto grid = grid_assignments(space);
        REQUIRE(grid.size() == 900);
        std::set<std::vector<double>> expected;
        for (int lr = 1; lr <= 9; ++lr)
            for (int b = 10; b <= 100; b += 10)
                for (int h = 1; h <= 10; ++h) expected.insert({lr / 10.0, double(b), double(h)});
        CHECK(as_points(grid) == expected);
        const std::string second = kind == ModelKind::rnn ? "numepochs" : "batch_size";
        CHECK(grid[0][1].first == second);
    }
}

TEST_CASE("grid order has the first axis slowest") {
    ParamSpace space;
    space.axes = {ParamAxis::discrete("learning_rate", {0.1, 0.2}), ParamAxis::discrete("batch_size", {10, 20, 30})};
    const auto g = grid_assignments(space);
    REQUIRE(g.size() == 6);
    CHECK(g[0] == Assignment{{"learning_rate", 0.1}, {"batch_size", 10}});
    CHECK(g[2] == Assignment{{"learning_rate", 0.1}, {"batch_size", 30}});
    CHECK(g[3] == Assignment{{"learning_rate", 0.2}, {"batch_size", 10}});
}

TEST_CASE("space validation") {
    ParamSpace dup;
    dup.axes = {ParamAxis::discrete("a", {1}), ParamAxis::discrete("a", {2})};
    CHECK_THROWS(dup.validate());
    ParamSpace empty;
    empty.axes = {ParamAxis::discrete("a", {})};
    CHECK_THROWS(empty.validate());
    ParamSpace inverted;
    inverted.axes = {ParamAxis::interval("a", 2.0, 1.0)};
    CHECK_THROWS(inverted.validate());
    CHECK_THROWS(inverted.grid_size());

    auto s = default_space(ModelKind::ffnn);
    CHECK(s.contains(Assignment{{"learning_rate", 0.3}, {"batch_size", 40}, {"hidden_nodes", 2}}));
    CHECK_FALSE(s.contains(Assignment{{"learning_rate", 0.35}, {"batch_size", 40}, {"hidden_nodes", 2}}));
    s.set_axis(ParamAxis::discrete("batch_size", {5}));
    CHECK(s.grid_size() == 90);
    s.set_axis(ParamAxis::discrete("hidden_dropout", {0.0, 0.5}));
    CHECK(s.axes.size() == 4);
}

TEST_CASE("random draws stay inside the space and repeat per seed") {
    ParamSpace space = default_space(ModelKind::ffnn);
    space.set_axis(ParamAxis::interval("learning_rate", 0.01, 0.9));
    space.set_axis(ParamAxis::interval("hidden_nodes", 1, 10, true));
    const auto a = random_assignments(space, 500, 42);
    REQUIRE(a.size() == 500);
    for (const auto& x : a) {
        CHECK(space.contains(x));
        const double h = *find_value(x, "hidden_nodes");
        CHECK(h == std::round(h));
    }
    CHECK(random_assignments(space, 500, 42) == a);
    CHECK_FALSE(random_assignments(space, 500, 43) == a);
    CHECK(random_assignments(space, 10, 42) == std::vector<Assignment>(a.begin(), a.begin() + 10));
}

TEST_CASE("grid and random search pick the best validation trial") {
    const auto space = default_space(ModelKind::ffnn);
    const auto g = grid_search(space, peaked_evaluator(0.3), 3);
    CHECK(g.trials.size() == 900);
    CHECK(*find_value(g.best.assignment, "learning_rate") == doctest::Approx(0.3));
    // the earliest of the 100 tied points
    CHECK(g.best.index == 200);
    for (std::size_t i = 0; i < g.trials.size(); ++i) CHECK(g.trials[i].index == i);

    const auto r = random_search(space, 50, 9, peaked_evaluator(0.3), 2);
    CHECK(r.trials.size() == 50);
    CHECK(r.best.index == best_index(r.trials));
}

TEST_CASE("best_index ties go to the earliest trial") {
    std::vector<TrialResult> t(4);
    t[1].validation_accuracy = 0.8;
    t[2].validation_accuracy = 0.8;
    t[3].validation_accuracy = 0.7;
    CHECK(best_index(t) == 1);
    CHECK_THROWS(best_index({}));
}

TEST_CASE("parallel evaluation keeps order and propagates the first error") {
    std::vector<Assignment> list(40, Assignment{{"learning_rate", 0.1}});
    std::atomic<int> calls{0};
    auto eval = [&](const Assignment& a, std::size_t i) {
        ++calls;
        TrialResult r;
        r.index = i;
        r.assignment = a;
        r.validation_accuracy = static_cast<double>(i);
        return r;
    };
    const auto out = evaluate_all(list, eval, 4);
    CHECK(calls == 40);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i].validation_accuracy == double(i));

    auto failing = [](const Assignment&, std::size_t i) -> TrialResult {
        if (i == 7 || i == 30) throw std::runtime_error("boom " + std::to_string(i));
        return {};
    };
    try {
        evaluate_all(list, failing, 4);
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "boom 7");
    }
}

TEST_CASE("nelder-mead minimizes simple functions") {
    auto r1 = nelder_mead([](const std::vector<double>& x) { return (x[0] - 3) * (x[0] - 3); }, {0.0});
    CHECK(std::abs(r1.x[0] - 3.0) < 1e-3);
    NelderMeadOptions opt;
    opt.max_evals = 200;
    opt.tolerance = 1e-12;
    auto r2 = nelder_mead([](const std::vector<double>& x) { return x[0] * x[0] + x[1] * x[1]; }, {1.0, 1.0}, opt);
    CHECK(r2.f < 1e-6);
    CHECK(r2.evaluations <= 200);

    NelderMeadOptions boxed;
    boxed.lower = {0.0};
    boxed.upper = {2.0};
    auto r3 = nelder_mead([](const std::vector<double>& x) { return (x[0] - 3) * (x[0] - 3); }, {1.0}, boxed);
    CHECK(r3.x[0] == doctest::Approx(2.0).epsilon(1e-6));

    CHECK_THROWS(nelder_mead([](const std::vector<double>&) { return 0.0; }, {}));
    CHECK_THROWS(nelder_mead([](const std::vector<double>&) { return NAN; }, {1.0}));
}

TEST_CASE("nelder-mead search respects its budget and the space") {
    const auto space = default_space(ModelKind::ffnn);
    const auto r = nelder_mead_search(space, 30, peaked_evaluator(0.7));
    CHECK(r.trials.size() <= 30);
    for (const auto& t : r.trials) CHECK(space.contains(t.assignment));
    CHECK(*find_value(r.best.assignment, "learning_rate") == doctest::Approx(0.7));
}

TEST_CASE("learning-rate grid and sweep") {
    const auto grid = default_lr_grid();
    REQUIRE(grid.size() == 208);
    CHECK(grid.front() == 0.005);
    CHECK(grid.back() == 0.823);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] - grid[i - 1] == doctest::Approx(0.818 / 207));
    const auto curve = lr_sweep({0.1, 0.2}, [](double lr, std::size_t) { return std::vector<double>{lr, 3 * lr}; }, 2);
    REQUIRE(curve.size() == 2);
    CHECK(curve[1].learning_rate == 0.2);
    CHECK(curve[1].mean_accuracy == doctest::Approx(0.4));
    CHECK(curve[1].samples.size() == 2);
}

TEST_CASE("budget estimates") {
    const auto space = default_space(ModelKind::ffnn);
    Budget b;
    b.max_trials = 50;
    b.volume = 300;
    b.iterations = 10;
    CHECK(budget_estimate(space, b, SearchStrategy::grid).evaluations == 900);
    CHECK(budget_estimate(space, b, SearchStrategy::random).evaluations == 50);
    CHECK(budget_estimate(space, b, SearchStrategy::lr_sweep).evaluations == 9);
    CHECK(budget_estimate(space, b, SearchStrategy::none).evaluations == 1);
    CHECK(budget_estimate(space, b, SearchStrategy::random).relative_cost == doctest::Approx(1500));
    b.iterations = 0;
    CHECK_THROWS(budget_estimate(space, b, SearchStrategy::grid));
}

TEST_CASE("strategy and status names") {
    CHECK(parse_search_strategy("nelder-mead") == SearchStrategy::nelder_mead);
    CHECK(parse_search_strategy("baseline") == SearchStrategy::none);
    CHECK(to_string(SearchStrategy::lr_sweep) == "lr_sweep");
    CHECK_THROWS(parse_search_strategy("anneal"));
    CHECK(parse_trial_status("diverged") == TrialStatus::diverged);
    CHECK_THROWS(parse_trial_status("okay"));
}

TEST_CASE("apply_assignment") {
    TrainConfig base;
    base.hidden_dims = {5, 5};
    const auto c = apply_assignment(base, {{"learning_rate", 0.4}, {"hidden_nodes", 3}, {"numepochs", 20}});
    CHECK(c.learning_rate == 0.4);
    CHECK(c.hidden_dims == std::vector<std::size_t>{3, 3});
    CHECK(c.epochs == 20);
    CHECK_THROWS(apply_assignment(base, {{"momentum", 0.9}}));
}

TEST_CASE("trial log round trip") {
    std::vector<TrialRecord> recs;
    for (std::size_t i = 0; i < 4; ++i) recs.push_back(sample_record(i));
    const auto text = format_trial_log(recs);
    auto back = parse_trial_log(text);
    REQUIRE(back.size() == 4);
    CHECK(format_trial_log(back) == text);
    CHECK(back[2].result.message == recs[2].result.message);
    CHECK(back[2].result.status == TrialStatus::failed);
    CHECK(back[1].seed == recs[1].seed);
    CHECK(back[3].result.test_accuracy == recs[3].result.test_accuracy);
    CHECK(back[0].result.wall_time == 0.0);
    attach_trial_times(back, format_trial_times(recs));
    CHECK(back[3].result.wall_time == 0.75);
    CHECK(trial_times_path("out/x/trials.csv") == "out/x/trials.times.csv");
    CHECK(text.substr(0, text.find('\n')).find("wall_time") == std::string::npos);
}

TEST_CASE("trial log schema errors name the column") {
    const auto text = format_trial_log({sample_record(0)});
    auto dropped = text;
    dropped.replace(dropped.find(",status"), 7, "");
    try {
        parse_trial_log(dropped);
        FAIL("expected a schema error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("status") != std::string::npos);
    }
    auto renamed = text;
    renamed.replace(renamed.find("dataset"), 7, "datazet");
    CHECK_THROWS_AS(parse_trial_log(renamed), ParseError);
    auto bad_cell = text;
    bad_cell.replace(bad_cell.rfind(",10,"), 4, ",x1,");
    try {
        parse_trial_log(bad_cell);
        FAIL("expected a cell error");
    } catch (const ParseError& e) {
        CHECK(e.row() == 2);
    }
}

}
