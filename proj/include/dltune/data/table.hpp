#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dltune {

enum class ColumnKind { numeric, factor };

/// Per-column metadata.
///
/// A factor column stores one code per cell. factor_levels holds the distinct
/// raw tokens in sorted order and level_codes[i] is the code used for
/// factor_levels[i]; codes always form a permutation of 1..CF. After
/// factor_to_numeric the column turns numeric but keeps both lists so the
/// original tokens can still be decoded.
struct ColumnMeta {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;
    std::vector<std::string> factor_levels;
    std::vector<int> level_codes;
    bool is_label = false;

    bool has_levels() const { return !factor_levels.empty(); }
    /// Token for a stored code; throws if the code is not in the mapping.
    const std::string& decode(double code) const;
};

/// Dense row-major numeric matrix with column metadata and a label column.
/// Instances are immutable by convention: every transformation returns a copy.
class DataTable {
public:
    DataTable() = default;
    DataTable(std::size_t rows, std::vector<ColumnMeta> columns, std::vector<double> values,
              std::size_t label_index);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return columns_.size(); }
    std::size_t n_features() const { return cols() - 1; }
    std::size_t label_index() const { return label_index_; }

    double at(std::size_t row, std::size_t col) const { return values_[row * cols() + col]; }
    double& at(std::size_t row, std::size_t col) { return values_[row * cols() + col]; }
    std::span<const double> row(std::size_t r) const {
        return {values_.data() + r * cols(), cols()};
    }
    const std::vector<double>& values() const { return values_; }

    const ColumnMeta& column(std::size_t c) const { return columns_.at(c); }
    ColumnMeta& column(std::size_t c) { return columns_.at(c); }
    const std::vector<ColumnMeta>& columns() const { return columns_; }

    std::vector<double> column_values(std::size_t c) const;
    std::vector<double> labels() const { return column_values(label_index_); }
    /// Indices of every non-label column, in order.
    std::vector<std::size_t> feature_indices() const;

    /// Throws std::invalid_argument when an invariant is broken.
    void validate() const;

    std::string name;

private:
    std::size_t rows_ = 0;
    std::vector<ColumnMeta> columns_;
    std::vector<double> values_;
    std::size_t label_index_ = 0;
};

}  // namespace dltune
