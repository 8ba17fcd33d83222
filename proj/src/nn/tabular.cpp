#include "dltune/nn/tabular.hpp"

#include <algorithm>
#include <stdexcept>

namespace dltune {

ClassIndex ClassIndex::from_labels(std::span<const double> labels) {
    ClassIndex out;
    out.classes.assign(labels.begin(), labels.end());
    std::sort(out.classes.begin(), out.classes.end());
    out.classes.erase(std::unique(out.classes.begin(), out.classes.end()), out.classes.end());
    return out;
}

int ClassIndex::index_of(double label) const {
    auto it = std::lower_bound(classes.begin(), classes.end(), label);
    if (it == classes.end() || *it != label)
        throw std::invalid_argument("label value not among the known classes");
    return static_cast<int>(it - classes.begin());
}

Matrix feature_matrix(const DataTable& table, std::span<const std::size_t> rows) {
    const auto features = table.feature_indices();
    Matrix out(rows.size(), features.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < features.size(); ++j)
            out(i, j) = table.at(rows[i], features[j]);
    return out;
}

Matrix feature_matrix(const DataTable& table) {
    std::vector<std::size_t> rows(table.rows());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return feature_matrix(table, rows);
}

std::vector<int> class_targets(const DataTable& table, std::span<const std::size_t> rows,
                               const ClassIndex& classes) {
    std::vector<int> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        out[i] = classes.index_of(table.at(rows[i], table.label_index()));
    return out;
}

std::vector<double> label_values(const DataTable& table, std::span<const std::size_t> rows) {
    std::vector<double> out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) out[i] = table.at(rows[i], table.label_index());
    return out;
}

ClassIndex table_classes(const DataTable& table) {
    const auto labels = table.labels();
    auto classes = ClassIndex::from_labels(labels);
    if (classes.size() < 2) throw std::invalid_argument("classification needs at least 2 classes");
    return classes;
}

}  // namespace dltune
