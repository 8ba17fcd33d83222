#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dltune/data/table.hpp"

namespace dltune {

struct FactorPolicy {
    enum class Kind { level_index, seeded_permutation };
    Kind kind = Kind::level_index;
    std::uint64_t seed = 0;

    static FactorPolicy level_index() { return {}; }
    static FactorPolicy seeded_permutation(std::uint64_t seed) {
        return {Kind::seeded_permutation, seed};
    }
};

bool detect_factor(const DataTable& table, std::size_t col);

/// Re-codes a factor column as numbers 1..CF and marks it numeric. The
/// level-to-code mapping stays in the column metadata.
DataTable factor_to_numeric(const DataTable& table, std::size_t col, const FactorPolicy& policy);

/// Fraction of cells exactly equal to 0.
double sparsity(const DataTable& table, bool include_label);

/// (x - min) / (max - min) per column; constant columns become 0.
DataTable minmax_normalize(const DataTable& table, bool exclude_label = true);

struct PreprocessOptions {
    FactorPolicy factor_policy;
    bool normalize = true;
    bool exclude_label = true;
    bool sparsity_include_label = true;
};

struct PreprocessResult {
    std::vector<DataTable> tables;
    std::vector<double> sparsity;  // SList, input order
};

/// Factor conversion, sparsity, then min-max normalization for each table.
/// seeded_permutation policies derive a per-column seed from `seed`, the
/// table name and the column name.
PreprocessResult preprocess_all(const std::vector<DataTable>& tables,
                                const PreprocessOptions& options, std::uint64_t seed);

struct DatasetProfile {
    std::string name;
    double sparsity = 0.0;
    std::map<double, std::size_t> class_histogram;
    double class_uniformity = 1.0;
    std::size_t n_features = 0;
    std::size_t n_instances = 0;
};

DatasetProfile profile(const DataTable& table, bool sparsity_include_label = true);

/// {name, n_features, n_instances, sparsity, class_histogram, class_uniformity}
std::string profile_json(const DatasetProfile& profile);

}  // namespace dltune
