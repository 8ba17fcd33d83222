#include "dltune/data/preprocess.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "dltune/common/csv.hpp"
#include "dltune/common/rng.hpp"

namespace dltune {

bool detect_factor(const DataTable& table, std::size_t col) {
    if (col >= table.cols()) throw std::out_of_range("detect_factor: column out of range");
    return table.column(col).kind == ColumnKind::factor;
}

DataTable factor_to_numeric(const DataTable& table, std::size_t col, const FactorPolicy& policy) {
    if (!detect_factor(table, col))
        throw std::invalid_argument("factor_to_numeric: column '" + table.column(col).name +
                                    "' is numeric");
    const auto& meta = table.column(col);
    const std::size_t cf = meta.factor_levels.size();

    std::vector<int> codes(cf);
    for (std::size_t i = 0; i < cf; ++i) codes[i] = static_cast<int>(i) + 1;
    if (policy.kind == FactorPolicy::Kind::seeded_permutation) {
        Rng rng(policy.seed);
        rng.shuffle(codes);
    }

    DataTable out = table;
    for (std::size_t r = 0; r < out.rows(); ++r) {
        const double old_code = out.at(r, col);
        std::size_t level = cf;
        for (std::size_t i = 0; i < cf; ++i)
            if (static_cast<double>(meta.level_codes[i]) == old_code) level = i;
        if (level == cf) throw std::logic_error("factor cell holds an unknown code");
        out.at(r, col) = codes[level];
    }
    auto& out_meta = out.column(col);
    out_meta.level_codes = std::move(codes);
    out_meta.kind = ColumnKind::numeric;
    return out;
}

double sparsity(const DataTable& table, bool include_label) {
    std::size_t zeros = 0;
    std::size_t total = 0;
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.cols(); ++c) {
            if (!include_label && c == table.label_index()) continue;
            ++total;
            if (table.at(r, c) == 0.0) ++zeros;
        }
    }
    if (total == 0) throw std::invalid_argument("sparsity: empty table");
    return static_cast<double>(zeros) / static_cast<double>(total);
}

DataTable minmax_normalize(const DataTable& table, bool exclude_label) {
    DataTable out = table;
    for (std::size_t c = 0; c < table.cols(); ++c) {
        if (exclude_label && c == table.label_index()) continue;
        if (table.column(c).kind == ColumnKind::factor)
            throw std::invalid_argument("minmax_normalize: column '" + table.column(c).name +
                                        "' is still a factor");
        double lo = INFINITY;
        double hi = -INFINITY;
        for (std::size_t r = 0; r < table.rows(); ++r) {
            const double v = table.at(r, c);
            if (!std::isfinite(v))
                throw std::invalid_argument("minmax_normalize: non-finite cell at row " +
                                            std::to_string(r + 1) + ", column " +
                                            std::to_string(c + 1));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double range = hi - lo;
        for (std::size_t r = 0; r < table.rows(); ++r)
            out.at(r, c) = range > 0.0 ? (table.at(r, c) - lo) / range : 0.0;
    }
    return out;
}

PreprocessResult preprocess_all(const std::vector<DataTable>& tables,
                                const PreprocessOptions& options, std::uint64_t seed) {
    PreprocessResult result;
    result.tables.reserve(tables.size());
    result.sparsity.reserve(tables.size());
    for (const auto& input : tables) {
        DataTable table = input;
        // Label first, then any factor features.
        std::vector<std::size_t> order{table.label_index()};
        for (auto c : table.feature_indices()) order.push_back(c);
        for (auto c : order) {
            if (!detect_factor(table, c)) continue;
            FactorPolicy policy = options.factor_policy;
            if (policy.kind == FactorPolicy::Kind::seeded_permutation)
                policy.seed = derive_seed(derive_seed(seed, table.name), table.column(c).name);
            table = factor_to_numeric(table, c, policy);
        }
        result.sparsity.push_back(sparsity(table, options.sparsity_include_label));
        if (options.normalize) table = minmax_normalize(table, options.exclude_label);
        result.tables.push_back(std::move(table));
    }
    return result;
}

DatasetProfile profile(const DataTable& table, bool sparsity_include_label) {
    if (table.column(table.label_index()).kind == ColumnKind::factor)
        throw std::invalid_argument("profile: label column must be numerically encoded");
    DatasetProfile p;
    p.name = table.name;
    p.sparsity = sparsity(table, sparsity_include_label);
    p.n_features = table.n_features();
    p.n_instances = table.rows();
    for (double label : table.labels()) ++p.class_histogram[label];

    const std::size_t k = p.class_histogram.size();
    if (k <= 1) {
        p.class_uniformity = 1.0;
    } else {
        double entropy = 0.0;
        for (const auto& [label, count] : p.class_histogram) {
            const double q = static_cast<double>(count) / static_cast<double>(table.rows());
            entropy -= q * std::log(q);
        }
        p.class_uniformity = entropy / std::log(static_cast<double>(k));
    }
    return p;
}

std::string profile_json(const DatasetProfile& p) {
    nlohmann::ordered_json j;
    j["name"] = p.name;
    j["n_features"] = p.n_features;
    j["n_instances"] = p.n_instances;
    j["sparsity"] = p.sparsity;
    nlohmann::ordered_json hist = nlohmann::ordered_json::object();
    for (const auto& [label, count] : p.class_histogram) hist[format_double(label)] = count;
    j["class_histogram"] = hist;
    j["class_uniformity"] = p.class_uniformity;
    return j.dump(2);
}

}  // namespace dltune
