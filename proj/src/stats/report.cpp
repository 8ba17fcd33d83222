#include "dltune/stats/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "dltune/common/csv.hpp"
#include "dltune/stats/kruskal_wallis.hpp"

namespace dltune {
namespace {

using json = nlohmann::ordered_json;
using CellKey = std::tuple<std::string, std::string, std::string, bool>;  // dataset, model, strategy, normalized

CellKey cell_of(const TrialRecord& t) { return {t.dataset, t.model, t.strategy, t.normalized}; }

double pick(const TrialResult& r, AccuracyStream s) {
    return s == AccuracyStream::test ? r.test_accuracy : r.validation_accuracy;
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

json assignment_json(const Assignment& a) {
    json o = json::object();
    for (const auto& name : known_hyperparameters())
        if (auto v = find_value(a, name)) o[name] = *v;
    return o;
}

json kw_json(const std::vector<GroupSample>& groups, const ReportOptions& options) {
    json o;
    json labels = json::array();
    for (const auto& g : groups) labels.push_back(g.label);
    o["groups"] = labels;
    const auto r = kruskal_wallis(groups, options.tie_correction);
    o["h"] = r.h;
    o["df"] = r.df;
    o["p_value"] = r.p_value;
    o["reject"] = r.reject;
    return o;
}

}  // namespace

std::vector<SelectedTrial> select_best(const std::vector<TrialRecord>& trials) {
    std::map<CellKey, SelectedTrial> cells;
    for (const auto& t : trials) {
        auto key = cell_of(t);
        auto it = cells.find(key);
        if (it == cells.end()) {
            cells.emplace(key, SelectedTrial{t.dataset, t.model, t.strategy, t.normalized, t.result});
        } else if (t.result.validation_accuracy > it->second.best.validation_accuracy) {
            it->second.best = t.result;
        }
    }
    std::vector<SelectedTrial> out;
    for (auto& [_, s] : cells) out.push_back(std::move(s));
    return out;
}

std::string box_panel(const std::string& model, const std::string& strategy, bool normalized) {
    static const std::vector<std::string> models{"DBN", "FFNN", "RNN", "SAE"};
    const auto m = std::find(models.begin(), models.end(), model);
    int s = strategy == "grid" ? 0 : strategy == "random" ? 1 : -1;
    if (m == models.end() || s < 0) return "";
    const int index = static_cast<int>(m - models.begin()) * 4 + s * 2 + (normalized ? 1 : 0);
    return std::string(1, static_cast<char>('a' + index));
}

std::string summary_json(const std::vector<TrialRecord>& trials, const ReportOptions& options) {
    json doc;
    doc["stream"] = to_string(options.stream);
    doc["tie_correction"] = options.tie_correction;
    doc["trials"] = trials.size();

    json groups = json::array();
    if (!trials.empty()) {
        const std::vector<std::string> keys{"dataset", "model", "strategy", "normalized"};
        const auto val = mean_accuracy(trials, keys, AccuracyStream::validation);
        const auto test = mean_accuracy(trials, keys, AccuracyStream::test);
        const auto best = select_best(trials);
        std::map<CellKey, std::map<std::string, std::size_t>> statuses;
        for (const auto& t : trials) statuses[cell_of(t)][to_string(t.result.status)]++;
        for (std::size_t i = 0; i < val.size(); ++i) {
            const auto& k = val[i].key;
            const CellKey key{k[0], k[1], k[2], k[3] == "true"};
            const auto& b = best[i].best;
            json g;
            g["dataset"] = k[0];
            g["model"] = k[1];
            g["strategy"] = k[2];
            g["normalized"] = k[3] == "true";
            g["count"] = val[i].count;
            g["validation_mean"] = val[i].mean;
            g["validation_std"] = val[i].std;
            g["test_mean"] = test[i].mean;
            g["test_std"] = test[i].std;
            json st = json::object();
            for (const auto& [name, n] : statuses[key]) st[name] = n;
            g["status_counts"] = st;
            g["best"] = {{"trial", b.index},
                         {"assignment", assignment_json(b.assignment)},
                         {"validation_accuracy", b.validation_accuracy},
                         {"test_accuracy", b.test_accuracy}};
            groups.push_back(std::move(g));
        }
    }
    doc["groups"] = std::move(groups);

    // Samples: accuracy of every trial in the chosen stream.
    std::map<std::tuple<std::string, bool>, std::map<std::string, std::vector<double>>> by_model;     // (strategy, norm) -> model
    std::map<std::tuple<std::string, bool>, std::map<std::string, std::vector<double>>> by_strategy;  // (model, norm) -> strategy
    for (const auto& t : trials) {
        by_model[{t.strategy, t.normalized}][t.model].push_back(pick(t.result, options.stream));
        by_strategy[{t.model, t.normalized}][t.strategy].push_back(pick(t.result, options.stream));
    }
    json tests = json::array();
    auto emit = [&](const char* comparison, const char* fixed, const std::string& value, bool normalized,
                    const std::map<std::string, std::vector<double>>& samples) {
        if (samples.size() < 2) return;
        std::vector<GroupSample> groups;
        for (const auto& [label, values] : samples) groups.push_back({label, values});
        json o;
        o["comparison"] = comparison;
        o[fixed] = value;
        o["normalized"] = normalized;
        o.update(kw_json(groups, options));
        tests.push_back(std::move(o));
    };
    for (const auto& [key, samples] : by_model) emit("models", "strategy", std::get<0>(key), std::get<1>(key), samples);
    for (const auto& [key, samples] : by_strategy) emit("strategies", "model", std::get<0>(key), std::get<1>(key), samples);
    doc["kruskal_wallis"] = std::move(tests);
    return doc.dump(2) + "\n";
}

std::string boxdata_csv(const std::vector<TrialRecord>& trials, const ReportOptions& options) {
    std::map<std::tuple<std::string, std::string, bool>, std::vector<double>> cells;
    for (const auto& s : select_best(trials)) cells[{s.model, s.strategy, s.normalized}].push_back(pick(s.best, options.stream));
    std::vector<std::tuple<std::string, std::string, std::string, bool>> order;
    for (const auto& [key, _] : cells) {
        const auto& [model, strategy, normalized] = key;
        order.emplace_back(box_panel(model, strategy, normalized), model, strategy, normalized);
    }
    // Lettered panels first in letter order, the rest after.
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        const bool ea = std::get<0>(a).empty(), eb = std::get<0>(b).empty();
        if (ea != eb) return !ea;
        return std::get<0>(a) < std::get<0>(b);
    });
    std::string out = "panel,model,strategy,normalized,n,min,q1,median,q3,max,mean\n";
    for (const auto& [panel, model, strategy, normalized] : order) {
        const auto& values = cells[{model, strategy, normalized}];
        const auto b = box_summary(values);
        out += join_csv({panel, model, strategy, bool_text(normalized), std::to_string(values.size()), format_double(b.min),
                         format_double(b.q1), format_double(b.median), format_double(b.q3), format_double(b.max),
                         format_double(b.mean)}) +
               "\n";
    }
    return out;
}

std::string ranking_csv(const std::vector<TrialRecord>& trials, const ReportOptions& options) {
    std::map<std::tuple<std::string, std::string, bool>, std::vector<std::pair<std::string, double>>> cells;
    for (const auto& s : select_best(trials))
        cells[{s.model, s.strategy, s.normalized}].emplace_back(s.dataset, pick(s.best, options.stream));
    std::string out = "model,strategy,normalized,rank,dataset,accuracy\n";
    for (const auto& [key, results] : cells) {
        const auto& [model, strategy, normalized] = key;
        const auto ranked = ranking_table(results);
        for (std::size_t i = 0; i < ranked.size(); ++i)
            out += join_csv({model, strategy, bool_text(normalized), std::to_string(i + 1), ranked[i].first,
                             format_double(ranked[i].second)}) +
                   "\n";
    }
    return out;
}

std::string timing_csv(const std::vector<TrialRecord>& trials) {
    std::string out = "method,model,strategy,runs,trials,mean_seconds\n";
    for (const auto& r : timing_table(trials))
        out += join_csv({r.method, r.model, r.strategy, std::to_string(r.runs), std::to_string(r.trials),
                         format_double(r.mean_seconds)}) +
               "\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_report(const std::vector<TrialRecord>& trials, const std::string& dir, const ReportOptions& options) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path d(dir);
    write_text_file((d / "summary.json").string(), summary_json(trials, options));
    write_text_file((d / "boxdata.csv").string(), boxdata_csv(trials, options));
    write_text_file((d / "ranking.csv").string(), ranking_csv(trials, options));
    write_text_file((d / "timing.csv").string(), timing_csv(trials));
}

}  // namespace dltune
