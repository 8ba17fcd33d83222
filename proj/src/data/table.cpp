#include "dltune/data/table.hpp"

#include <algorithm>
#include <stdexcept>

namespace dltune {

const std::string& ColumnMeta::decode(double code) const {
    for (std::size_t i = 0; i < level_codes.size(); ++i)
        if (static_cast<double>(level_codes[i]) == code) return factor_levels[i];
    throw std::out_of_range("column '" + name + "' has no level for code " +
                            std::to_string(code));
}

DataTable::DataTable(std::size_t rows, std::vector<ColumnMeta> columns, std::vector<double> values,
                     std::size_t label_index)
    : rows_(rows), columns_(std::move(columns)), values_(std::move(values)),
      label_index_(label_index) {
    for (std::size_t c = 0; c < columns_.size(); ++c) columns_[c].is_label = (c == label_index_);
    validate();
}

std::vector<double> DataTable::column_values(std::size_t c) const {
    if (c >= cols()) throw std::out_of_range("column index out of range");
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
    return out;
}

std::vector<std::size_t> DataTable::feature_indices() const {
    std::vector<std::size_t> out;
    out.reserve(n_features());
    for (std::size_t c = 0; c < cols(); ++c)
        if (c != label_index_) out.push_back(c);
    return out;
}

void DataTable::validate() const {
    if (values_.size() != rows_ * columns_.size())
        throw std::invalid_argument("table storage does not match rows x columns");
    if (label_index_ >= columns_.size())
        throw std::invalid_argument("label index out of range");
    if (rows_ < 2) throw std::invalid_argument("table needs at least 2 instances");
    if (columns_.size() < 2) throw std::invalid_argument("table needs at least 1 feature");
    for (const auto& meta : columns_) {
        if (meta.kind == ColumnKind::factor && meta.factor_levels.empty())
            throw std::invalid_argument("factor column '" + meta.name + "' has no levels");
        if (meta.level_codes.size() != meta.factor_levels.size())
            throw std::invalid_argument("column '" + meta.name + "' has an incomplete level map");
        std::vector<int> codes = meta.level_codes;
        std::sort(codes.begin(), codes.end());
        for (std::size_t i = 0; i < codes.size(); ++i)
            if (codes[i] != static_cast<int>(i) + 1)
                throw std::invalid_argument("column '" + meta.name +
                                            "' level codes are not a permutation of 1..CF");
    }
}

}  // namespace dltune
