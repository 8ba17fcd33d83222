#include "dltune/nn/matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "dltune/common/rng.hpp"

namespace dltune {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw std::invalid_argument("matrix data has wrong size");
}

Matrix Matrix::glorot(std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix m(rows, cols);
    const double r = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (auto& v : m.data_) v = rng.uniform(-r, r);
    return m;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto orow = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto brow = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("matmul_tn: shape mismatch");
    Matrix out(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        auto arow = a.row(k);
        auto brow = b.row(k);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double aki = arow[i];
            if (aki == 0.0) continue;
            auto orow = out.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aki * brow[j];
        }
    }
    return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("matmul_nt: shape mismatch");
    Matrix out(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto arow = a.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            auto brow = b.row(j);
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += arow[k] * brow[k];
            out(i, j) = s;
        }
    }
    return out;
}

std::vector<double> matvec(const Matrix& m, std::span<const double> x) {
    if (m.cols() != x.size()) throw std::invalid_argument("matvec: shape mismatch");
    std::vector<double> y(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto row = m.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<double> matvec_t(const Matrix& m, std::span<const double> x) {
    if (m.rows() != x.size()) throw std::invalid_argument("matvec_t: shape mismatch");
    std::vector<double> y(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto row = m.row(i);
        for (std::size_t j = 0; j < m.cols(); ++j) y[j] += row[j] * x[i];
    }
    return y;
}

void add_row_vector(Matrix& m, std::span<const double> v) {
    if (m.cols() != v.size()) throw std::invalid_argument("add_row_vector: shape mismatch");
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto row = m.row(i);
        for (std::size_t j = 0; j < v.size(); ++j) row[j] += v[j];
    }
}

std::vector<double> column_sums(const Matrix& m) {
    std::vector<double> s(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto row = m.row(i);
        for (std::size_t j = 0; j < m.cols(); ++j) s[j] += row[j];
    }
    return s;
}

}  // namespace dltune
