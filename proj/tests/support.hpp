#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dltune/common/rng.hpp"
#include "dltune/data/table.hpp"
#include "dltune/nn/matrix.hpp"
#include "dltune/splits/splits.hpp"

namespace testing_support {

using dltune::ColumnMeta;
using dltune::DataTable;
using dltune::Matrix;

/// Numeric table with the label as last column.
inline DataTable make_table(const Matrix& x, const std::vector<double>& labels, const std::string& name = "t") {
    std::vector<ColumnMeta> cols;
    for (std::size_t j = 0; j < x.cols(); ++j) cols.push_back({"f" + std::to_string(j), {}, {}, {}, false});
    cols.push_back({"y", {}, {}, {}, true});
    std::vector<double> values;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) values.push_back(x(i, j));
        values.push_back(labels[i]);
    }
    DataTable t(x.rows(), cols, values, x.cols());
    t.name = name;
    return t;
}

/// Two Gaussian blobs in [0, 1]^dim, centred at 0.25 and 0.75.
inline DataTable blobs(std::size_t n, std::size_t dim, std::uint64_t seed, double spread = 0.06) {
    dltune::Rng rng(seed);
    Matrix x(n, dim);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = static_cast<double>(i % 2);
        const double centre = y[i] == 0.0 ? 0.25 : 0.75;
        for (std::size_t j = 0; j < dim; ++j) {
            const double u1 = std::max(rng.uniform01(), 1e-12), u2 = rng.uniform01();
            const double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
            x(i, j) = std::clamp(centre + spread * g, 0.0, 1.0);
        }
    }
    return make_table(x, y, "blobs");
}

inline dltune::SplitPlan all_rows_train(std::size_t n) {
    dltune::SplitPlan p;
    for (std::size_t i = 0; i < n; ++i) p.train.push_back(i);
    return p;
}

}  // namespace testing_support
