#pragma once

#include "fdiff/scalar.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fdiff {

/// Dense matrix over Q(i) with exact Gaussian elimination.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Scalar& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix scaled(const Scalar& c) const;
    bool operator==(const Matrix& o) const = default;

    bool is_zero() const;
    std::size_t rank() const;
    std::optional<Matrix> inverse() const;
    /// One solution of A x = b, empty when the system is inconsistent.
    std::optional<std::vector<Scalar>> solve(const std::vector<Scalar>& b) const;

    std::string str() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> a_;
};

/// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> row_reduce(Matrix& m);

}  // namespace fdiff
