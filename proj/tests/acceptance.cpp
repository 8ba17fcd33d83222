// Acceptance checks, one line per criterion:
//   PASS C<n> <name> | <detail>
// Run all with no arguments or one with --criterion N.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dltune/common/rng.hpp"
#include "dltune/data/io.hpp"
#include "dltune/data/preprocess.hpp"
#include "dltune/experiment/config.hpp"
#include "dltune/experiment/evaluate.hpp"
#include "dltune/experiment/runner.hpp"
#include "dltune/nn/autoencoder.hpp"
#include "dltune/nn/ffnn.hpp"
#include "dltune/nn/rbm.hpp"
#include "dltune/nn/rnn.hpp"
#include "dltune/nn/tabular.hpp"
#include "dltune/search/nelder_mead.hpp"
#include "dltune/search/search.hpp"
#include "dltune/splits/splits.hpp"
#include "dltune/stats/kruskal_wallis.hpp"

using namespace dltune;
namespace fs = std::filesystem;

namespace {

constexpr double kSparsityTol = 1e-6;
constexpr std::size_t kSparsityMinDatasets = 5;
constexpr double kIdempotenceTol = 1e-12;
constexpr double kGradRelTol = 1e-4;
constexpr double kGradFloor = 1e-8;  // denominator floor for near-zero gradients
constexpr double kFdStep = 1e-5;
constexpr double kRnnCycleAcc = 0.95;
constexpr double kKwOracle = 3.857;
constexpr double kKwTol = 1e-3;
constexpr double kNmTol = 1e-3;
constexpr double kNmSphere = 1e-6;
constexpr std::size_t kNmBudget = 200;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

DataTable numeric_table(const Matrix& x, const std::vector<double>& y) {
    std::vector<ColumnMeta> cols;
    for (std::size_t j = 0; j < x.cols(); ++j) cols.push_back({"x" + std::to_string(j), {}, {}, {}, false});
    cols.push_back({"y", {}, {}, {}, true});
    std::vector<double> v;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) v.push_back(x(i, j));
        v.push_back(y[i]);
    }
    return DataTable(x.rows(), cols, v, x.cols());
}

// Reference sparsity per dataset.
const std::map<std::string, double>& reference_sparsity() {
    static const std::map<std::string, double> t{
        {"bank-marketing", 0.3101071},   {"blood-transfusion", 0.001336898}, {"climate-simulation", 0},
        {"credit-g", 0.07585714},        {"diabetes", 0.1103877},           {"tic-tac-toe", 0.2066806},
        {"electricity", 0.06653621},     {"gina_agnostic", 0.689833},       {"hill-valley", 0.004950495},
        {"ilpd", 0},                     {"kr-vs-kp", 0.00189426},          {"madelon", 7.676954e-07},
        {"monks-problems-1", 0.07142857}, {"monks-problems-2", 0.09389113}, {"monks-problems-3", 0.06859206},
        {"mozilla4", 0.1706229},         {"musk", 0.00775547},              {"nomao", 0.01575731},
        {"ozone-level-8hr", 0.01229849}, {"phoneme", 0},                    {"qsar-biodeg", 0.4520876},
        {"scene", 0.02767761},           {"steel-plates-fault", 0.2011243}, {"wdbc", 0.004422019}};
    return t;
}

Outcome c1_sparsity() {
    const auto config = load_experiment_config(std::string(DLTUNE_CONFIG_DIR) + "/paper-profile.json");
    std::vector<std::string> matched, mismatched, missing;
    for (const auto& spec : config.datasets) {
        fs::path path = spec.path;
        TableFormat format = spec.format;
        if (!fs::exists(path)) {
            path.replace_extension(".csv");
            format = TableFormat::csv;
        }
        if (!fs::exists(path)) {
            missing.push_back(spec.name);
            continue;
        }
        const auto table = load_table(path.string(), format, spec.label);
        PreprocessOptions opt = config.preprocessing;
        opt.normalize = false;
        opt.sparsity_include_label = true;
        const double with_label = preprocess_all({table}, opt, config.seed).sparsity[0];
        opt.sparsity_include_label = false;
        const double without_label = preprocess_all({table}, opt, config.seed).sparsity[0];
        const double expected = reference_sparsity().at(spec.name);
        const bool ok = std::abs(with_label - expected) <= kSparsityTol || std::abs(without_label - expected) <= kSparsityTol;
        (ok ? matched : mismatched).push_back(spec.name + "=" + fmt("%.9g", with_label));
    }
    std::set<std::string> names;
    for (const auto& m : matched) names.insert(m.substr(0, m.find('=')));
    const bool required = names.count("blood-transfusion") && names.count("hill-valley") && names.count("climate-simulation");
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
        return s.empty() ? std::string("-") : s;
    };
    return {matched.size() >= kSparsityMinDatasets && required,
            std::to_string(matched.size()) + " matched [" + join(matched) + "], mismatched [" + join(mismatched) +
                "], " + std::to_string(missing.size()) + " not present locally"};
}

Outcome c2_grid() {
    const auto space = default_space(ModelKind::ffnn);
    auto stub = [](const Assignment& a, std::size_t i) {
        TrialResult r;
        r.index = i;
        r.assignment = a;
        return r;
    };
    const auto result = grid_search(space, stub);
    std::set<std::vector<double>> seen, expected;
    for (const auto& t : result.trials) {
        std::vector<double> p;
        for (const auto& kv : t.assignment) p.push_back(kv.second);
        seen.insert(p);
    }
    for (int lr = 1; lr <= 9; ++lr)
        for (int b = 10; b <= 100; b += 10)
            for (int h = 1; h <= 10; ++h) expected.insert({lr / 10.0, double(b), double(h)});
    return {result.trials.size() == 900 && seen.size() == 900 && seen == expected,
            std::to_string(result.trials.size()) + " trials, " + std::to_string(seen.size()) + " unique"};
}

Outcome c3_cv() {
    const auto plans = repeated_cv(200, 10, 10, 2019);
    bool ok = plans.size() == 100;
    for (std::size_t r = 0; ok && r < 10; ++r) {
        std::vector<int> hits(200, 0);
        for (std::size_t f = 0; f < 10; ++f) {
            const auto& p = plans[r * 10 + f];
            ok = ok && p.test.size() == 20 && p.train.size() == 180 && p.validation.empty();
            for (auto i : p.test) hits[i]++;
            try {
                check_partition(p, 200);
            } catch (const std::exception&) {
                ok = false;
            }
        }
        ok = ok && std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
    }
    return {ok, std::to_string(plans.size()) + " plans"};
}

Outcome c4_normalization() {
    Rng rng(4);
    double worst_idem = 0.0;
    std::size_t range_bad = 0, rank_bad = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 2 + rng.below(40), d = 1 + rng.below(6);
        Matrix x(n, d);
        for (std::size_t j = 0; j < d; ++j) {
            const double scale = std::pow(10.0, rng.uniform(-4, 4));
            const bool constant = rng.below(8) == 0;
            const bool coarse = rng.below(4) == 0;
            for (std::size_t i = 0; i < n; ++i) {
                double v = constant ? 3.0 : rng.uniform(-scale, scale);
                if (coarse) v = std::round(v / scale * 3);
                x(i, j) = v;
            }
        }
        std::vector<double> y(n, 0.0);
        const auto raw = numeric_table(x, y);
        const auto once = minmax_normalize(raw);
        const auto twice = minmax_normalize(once);
        for (std::size_t j = 0; j < d; ++j) {
            const auto a = raw.column_values(j), b = once.column_values(j), c = twice.column_values(j);
            const bool constant = *std::max_element(a.begin(), a.end()) == *std::min_element(a.begin(), a.end());
            for (std::size_t i = 0; i < n; ++i) {
                if (!constant && (b[i] < 0.0 || b[i] > 1.0)) ++range_bad;
                worst_idem = std::max(worst_idem, std::abs(b[i] - c[i]));
                for (std::size_t k = 0; k < n; ++k) {
                    const int sa = (a[i] > a[k]) - (a[i] < a[k]);
                    const int sb = (b[i] > b[k]) - (b[i] < b[k]);
                    if (!constant && sa != sb) ++rank_bad;
                }
            }
        }
    }
    return {range_bad == 0 && rank_bad == 0 && worst_idem <= kIdempotenceTol,
            "out of range " + std::to_string(range_bad) + ", rank violations " + std::to_string(rank_bad) +
                ", max idempotence gap " + fmt("%.3g", worst_idem)};
}

double rel_err(double analytic, double numeric) {
    return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), kGradFloor});
}

double fd_max_error(std::vector<double>& params, const std::vector<double>& grad, const std::function<double()>& loss) {
    double worst = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double keep = params[i];
        params[i] = keep + kFdStep;
        const double up = loss();
        params[i] = keep - kFdStep;
        const double down = loss();
        params[i] = keep;
        worst = std::max(worst, rel_err(grad[i], (up - down) / (2 * kFdStep)));
    }
    return worst;
}

Outcome c5_gradients() {
    double ffnn_worst = 0.0, rnn_worst = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(1000 + seed);
        auto model = make_feedforward(4, {5}, {0, 1, 2}, Activation::sigmoid, seed);
        Matrix x(8, 4);
        for (auto& v : x.data()) v = rng.uniform(-1, 1);
        std::vector<int> y(8);
        for (auto& c : y) c = static_cast<int>(rng.below(3));
        const auto g = ffnn_gradients(model, x, y);
        auto loss = [&] { return ffnn_loss(model, x, y); };
        ffnn_worst = std::max(ffnn_worst, fd_max_error(model.hidden[0].weights.data(), g.weights[0].data(), loss));
        ffnn_worst = std::max(ffnn_worst, fd_max_error(model.hidden[0].bias, g.biases[0], loss));
        ffnn_worst = std::max(ffnn_worst, fd_max_error(model.head.weights.data(), g.weights[1].data(), loss));
        ffnn_worst = std::max(ffnn_worst, fd_max_error(model.head.bias, g.biases[1], loss));

        auto rnn = RecurrentModel::random(2, 4, 3, seed);
        std::vector<Sequence> batch;
        for (int b = 0; b < 4; ++b) {
            Sequence s{Matrix(3, 2), {}};
            for (auto& v : s.inputs.data()) v = rng.uniform(-1, 1);
            for (int t = 0; t < 3; ++t) s.targets.push_back(static_cast<int>(rng.below(3)));
            batch.push_back(s);
        }
        const auto rg = rnn_gradients(rnn, batch);
        auto rloss = [&] { return rnn_loss(rnn, batch); };
        rnn_worst = std::max(rnn_worst, fd_max_error(rnn.w_in().data(), rg.w_in.data(), rloss));
        rnn_worst = std::max(rnn_worst, fd_max_error(rnn.w_nn().data(), rg.w_nn.data(), rloss));
        rnn_worst = std::max(rnn_worst, fd_max_error(rnn.w_o().data(), rg.w_o.data(), rloss));
    }
    return {ffnn_worst <= kGradRelTol && rnn_worst <= kGradRelTol,
            "max relative error FFNN " + fmt("%.2e", ffnn_worst) + ", RNN " + fmt("%.2e", rnn_worst)};
}

Outcome c6_smoke() {
    // XOR: stop at the first epoch with perfect training accuracy.
    const auto xor_data = numeric_table(Matrix(4, 2, {0, 0, 0, 1, 1, 0, 1, 1}), {0, 1, 1, 0});
    auto ffnn = make_feedforward(2, {4}, {0, 1}, Activation::sigmoid, 1);
    const Matrix xor_x = feature_matrix(xor_data);
    const std::vector<int> xor_y{0, 1, 1, 0};
    TrainConfig xc;
    xc.learning_rate = 0.5;
    xc.batch_size = 4;
    xc.epochs = 1;
    xc.seed = 1;
    std::size_t xor_epochs = 0;
    for (std::size_t e = 1; e <= 5000; ++e) {
        xc.seed = derive_seed(1, e);
        train_feedforward(ffnn, xor_x, xor_y, xc);
        if (ffnn_predict(ffnn, xor_x).labels == std::vector<double>{0, 1, 1, 0}) {
            xor_epochs = e;
            break;
        }
    }

    std::vector<Sequence> seqs;
    for (int phase = 0; phase < 3; ++phase) {
        Sequence s{Matrix(12, 3), std::vector<int>(12)};
        for (int t = 0; t < 12; ++t) {
            s.inputs(t, (phase + t) % 3) = 1.0;
            s.targets[t] = (phase + t + 1) % 3;
        }
        seqs.push_back(s);
    }
    TrainConfig rc;
    rc.hidden_dims = {8};
    rc.learning_rate = 0.5;
    rc.batch_size = 3;
    rc.epochs = 300;
    rc.seed = 4;
    const auto rnn = rnn_train(seqs, 3, rc).model;
    std::size_t right = 0, total = 0;
    for (const auto& s : seqs) {
        const auto out = rnn_forward(rnn, s.inputs);
        for (std::size_t t = 0; t < out.rows(); ++t, ++total) {
            const auto row = out.row(t);
            right += static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()) == s.targets[t];
        }
    }
    const double rnn_acc = static_cast<double>(right) / static_cast<double>(total);

    Rng rng(7);
    Matrix mix(3, 20);
    for (auto& v : mix.data()) v = rng.uniform(-1, 1);
    Matrix sx(200, 20);
    for (std::size_t i = 0; i < 200; ++i) {
        const double z[3] = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        for (std::size_t j = 0; j < 20; ++j) sx(i, j) = sigmoid(z[0] * mix(0, j) + z[1] * mix(1, j) + z[2] * mix(2, j));
    }
    TrainConfig sc;
    sc.hidden_dims = {10, 5};
    sc.learning_rate = 0.1;
    sc.batch_size = 10;
    sc.epochs = 0;
    sc.seed = 2;
    const double mse0 = reconstruction_mse(sx, sae_pretrain(sx, sc).stack.reconstruct(sx));
    sc.epochs = 60;
    const double mse1 = reconstruction_mse(sx, sae_pretrain(sx, sc).stack.reconstruct(sx));

    Matrix onehot(8, 8);
    for (std::size_t i = 0; i < 8; ++i) onehot(i, i) = 1.0;
    TrainConfig dc;
    dc.hidden_dims = {6};
    dc.learning_rate = 0.5;
    dc.batch_size = 2;
    dc.epochs = 50;
    dc.seed = 8;
    const auto trace = dbn_pretrain(onehot, dc).reconstruction_traces[0];

    const bool ok = xor_epochs > 0 && rnn_acc >= kRnnCycleAcc && mse1 <= 0.5 * mse0 && trace.back() < trace.front();
    return {ok, "XOR solved at epoch " + std::to_string(xor_epochs) + ", RNN cycle accuracy " + fmt("%.3f", rnn_acc) +
                    ", SAE MSE " + fmt("%.4g", mse0) + " -> " + fmt("%.4g", mse1) + ", RBM error " +
                    fmt("%.4g", trace.front()) + " -> " + fmt("%.4g", trace.back())};
}

Outcome c7_kruskal_wallis() {
    const auto oracle = kruskal_wallis({{"a", {1, 2, 3}}, {"b", {4, 5, 6}}});
    const auto same = kruskal_wallis({{"a", {1, 2, 3, 4, 5}}, {"b", {1, 2, 3, 4, 5}}});
    Rng rng(77);
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
        std::vector<GroupSample> g(2 + rng.below(3)), m(g.size());
        for (std::size_t k = 0; k < g.size(); ++k)
            for (std::size_t i = 0, n = 2 + rng.below(8); i < n; ++i) {
                const double v = std::round(rng.uniform(-5, 5) * 2) / 2;
                g[k].values.push_back(v);
                m[k].values.push_back(std::exp(v) * 3 - 1);
            }
        worst = std::max(worst, std::abs(kruskal_wallis(g).h - kruskal_wallis(m).h));
    }
    return {std::abs(oracle.h - kKwOracle) <= kKwTol && same.p_value > 0.05 && worst <= 1e-9,
            "H " + fmt("%.6f", oracle.h) + ", identical groups p " + fmt("%.3f", same.p_value) +
                ", max H change under monotone maps " + fmt("%.2g", worst)};
}

Outcome c8_nelder_mead() {
    const auto a = nelder_mead([](const std::vector<double>& x) { return (x[0] - 3) * (x[0] - 3); }, {0.0});
    NelderMeadOptions opt;
    opt.max_evals = kNmBudget;
    const auto b = nelder_mead([](const std::vector<double>& x) { return x[0] * x[0] + x[1] * x[1]; }, {1.0, 1.0}, opt);
    return {std::abs(a.x[0] - 3.0) <= kNmTol && b.f < kNmSphere && b.evaluations <= kNmBudget,
            "x* " + fmt("%.6f", a.x[0]) + ", sphere f " + fmt("%.2e", b.f) + " after " +
                std::to_string(b.evaluations) + " evaluations"};
}

DataTable timing_dataset() {
    const fs::path wdbc = fs::path(DLTUNE_DATA_DIR) / "wdbc.csv";
    if (fs::exists(wdbc)) {
        PreprocessOptions opt;
        return preprocess_all({load_table(wdbc.string(), TableFormat::csv, std::string("Class"))}, opt, 1).tables[0];
    }
    Rng rng(9);
    Matrix x(300, 5);
    std::vector<double> y(300);
    for (std::size_t i = 0; i < 300; ++i) {
        y[i] = static_cast<double>(i % 2);
        for (std::size_t j = 0; j < 5; ++j) x(i, j) = y[i] * 0.5 + rng.uniform(0, 0.5);
    }
    return numeric_table(x, y);
}

Outcome c9_timing() {
    const auto data = timing_dataset();
    const auto plan = three_way(data.rows(), 2019);
    TrainConfig base;
    base.epochs = 3;
    base.hidden_dims = {5};
    const auto space = default_space(ModelKind::ffnn);
    auto eval = [&](const Assignment& a, std::size_t i) {
        auto r = run_trial(ModelKind::ffnn, data, plan, base, a, derive_seed(2019, i));
        r.index = i;
        return r;
    };
    auto t0 = std::chrono::steady_clock::now();
    run_trial(ModelKind::ffnn, data, plan, base, {}, 2019);
    const double single = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    random_search(space, 50, 2019, eval);
    const double random = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    grid_search(space, eval);
    const double grid = seconds_since(t0);
    return {grid > random && random > single, data.name + " FFNN, " + std::to_string(base.epochs) + " epochs: grid " +
                                                  fmt("%.3f", grid) + " s > random " + fmt("%.3f", random) +
                                                  " s > single " + fmt("%.4f", single) + " s"};
}

Outcome c10_normalization_gain() {
    constexpr std::size_t n = 300, d = 7;
    std::string detail;
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(derive_seed(10, seed));
        Matrix x(n, d);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            double score = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                const double z = rng.uniform(-1, 1);
                x(i, j) = z * std::pow(10.0, -3.0 + 6.0 * static_cast<double>(j) / (d - 1)) + 0.5 * std::pow(10.0, -3.0 + 6.0 * static_cast<double>(j) / (d - 1));
                score += (j % 2 == 0 ? 1.0 : -1.0) * z;
            }
            y[i] = score > 0 ? 1.0 : 0.0;
        }
        const auto raw = numeric_table(x, y);
        const auto normalized = minmax_normalize(raw);
        const auto plans = repeated_cv(n, 5, 1, derive_seed(11, seed));
        TrainConfig cfg;
        cfg.epochs = 30;
        cfg.hidden_dims = {5};
        cfg.learning_rate = 0.5;
        cfg.batch_size = 10;
        cfg.seed = seed;
        auto cv_mean = [&](const DataTable& t) {
            double s = 0.0;
            for (const auto& p : plans) s += fit_and_score(ModelKind::ffnn, t, p, cfg).test_accuracy;
            return s / static_cast<double>(plans.size());
        };
        const double a_norm = cv_mean(normalized), a_raw = cv_mean(raw);
        ok = ok && a_norm >= a_raw;
        detail += (detail.empty() ? "" : ", ") + fmt("%.3f", a_norm) + " vs " + fmt("%.3f", a_raw);
    }
    return {ok, "normalized vs raw CV accuracy per seed: " + detail};
}

Outcome c11_determinism() {
    const std::string config_path = std::string(DLTUNE_CONFIG_DIR) + "/paper-fffn-random.json";
    const fs::path scratch = fs::temp_directory_path() / "dltune-acceptance-c11";
    fs::remove_all(scratch);
    std::string first, second;
    for (int run = 0; run < 2; ++run) {
        auto config = load_experiment_config(config_path);
        RunOverrides o;
        o.output_dir = (scratch / std::to_string(run)).string();
        apply_overrides(config, o);
        std::ostringstream log;
        if (cmd_tune(config, log) != exit_ok) return {false, "tune failed: " + log.str()};
        std::ifstream in(fs::path(*o.output_dir) / "trials.csv", std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        (run == 0 ? first : second) = ss.str();
    }
    fs::remove_all(scratch);
    std::size_t rows = std::count(first.begin(), first.end(), '\n');
    return {!first.empty() && first == second,
            std::to_string(rows ? rows - 1 : 0) + " rows, " + (first == second ? "identical" : "different") + " bytes"};
}

struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
};

const std::vector<Criterion> criteria{
    {1, "sparsity fidelity", c1_sparsity},
    {2, "grid exhaustiveness", c2_grid},
    {3, "cv protocol", c3_cv},
    {4, "normalization properties", c4_normalization},
    {5, "gradient correctness", c5_gradients},
    {6, "learning smoke tests", c6_smoke},
    {7, "kruskal-wallis oracle", c7_kruskal_wallis},
    {8, "nelder-mead", c8_nelder_mead},
    {9, "timing ordering", c9_timing},
    {10, "normalization benefit", c10_normalization_gain},
    {11, "full determinism", c11_determinism},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }
    int failures = 0, ran = 0;
    for (const auto& c : criteria) {
        if (only && c.id != only) continue;
        ++ran;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s C%d %s | %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    if (ran == 0) {
        std::fprintf(stderr, "no criterion %d\n", only);
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
