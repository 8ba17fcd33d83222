#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dltune {

class Rng;

/// Row-major dense matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    /// Glorot-style uniform init in [-r, r], r = sqrt(6 / (rows + cols)).
    static Matrix glorot(std::size_t rows, std::size_t cols, Rng& rng);
    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool all_finite() const;
    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// a (n x k) * b (k x m)
Matrix matmul(const Matrix& a, const Matrix& b);
/// a^T (k x n)^T * b (k x m) -> n x m
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// a (n x k) * b^T (m x k)^T -> n x m
Matrix matmul_nt(const Matrix& a, const Matrix& b);

/// y = m * x for a column vector x.
std::vector<double> matvec(const Matrix& m, std::span<const double> x);
/// y = m^T * x
std::vector<double> matvec_t(const Matrix& m, std::span<const double> x);

void add_row_vector(Matrix& m, std::span<const double> v);
/// Column sums, i.e. ones^T * m.
std::vector<double> column_sums(const Matrix& m);

}  // namespace dltune
