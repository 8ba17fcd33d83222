#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dltune/data/table.hpp"
#include "dltune/nn/matrix.hpp"

namespace dltune {

/// Sorted distinct label values; a label's class index is its position.
struct ClassIndex {
    std::vector<double> classes;

    static ClassIndex from_labels(std::span<const double> labels);
    int index_of(double label) const;
    std::size_t size() const { return classes.size(); }
};

/// Feature columns (label excluded) of the selected rows.
Matrix feature_matrix(const DataTable& table, std::span<const std::size_t> rows);
/// Every row.
Matrix feature_matrix(const DataTable& table);

std::vector<int> class_targets(const DataTable& table, std::span<const std::size_t> rows,
                               const ClassIndex& classes);
std::vector<double> label_values(const DataTable& table, std::span<const std::size_t> rows);

/// Classes of a table; throws unless at least two are present.
ClassIndex table_classes(const DataTable& table);

}  // namespace dltune
