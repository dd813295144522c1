#include "fdiff/matrix.hpp"

#include "fdiff/error.hpp"

namespace fdiff {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw MismatchError("matrix shapes do not match");
    Matrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Scalar& v = (*this)(i, k);
            if (v.is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                if (!o(k, j).is_zero()) r(i, j) += v * o(k, j);
            }
        }
    }
    return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw MismatchError("matrix shapes do not match");
    Matrix r = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const { return *this + o.scaled(Scalar(-1)); }

Matrix Matrix::scaled(const Scalar& c) const {
    Matrix r = *this;
    for (auto& v : r.a_) v *= c;
    return r;
}

bool Matrix::is_zero() const {
    for (const auto& v : a_) {
        if (!v.is_zero()) return false;
    }
    return true;
}

std::vector<std::size_t> row_reduce(Matrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && m(p, col).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != row) {
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
        }
        Scalar inv = m(row, col).inverse();
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col).is_zero()) continue;
            Scalar f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) {
                if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::size_t Matrix::rank() const {
    Matrix m = *this;
    return row_reduce(m).size();
}

std::optional<Matrix> Matrix::inverse() const {
    if (rows_ != cols_) throw MismatchError("inverse of a non-square matrix");
    const std::size_t n = rows_;
    Matrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
        aug(i, n + i) = Scalar(1);
    }
    auto piv = row_reduce(aug);
    if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
    Matrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    }
    return inv;
}

std::optional<std::vector<Scalar>> Matrix::solve(const std::vector<Scalar>& b) const {
    if (b.size() != rows_) throw MismatchError("right-hand side length does not match");
    Matrix aug(rows_, cols_ + 1);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
        aug(i, cols_) = b[i];
    }
    auto piv = row_reduce(aug);
    if (!piv.empty() && piv.back() == cols_) return std::nullopt;
    std::vector<Scalar> x(cols_);
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug(r, cols_);
    return x;
}

std::string Matrix::str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        out += i ? "; " : "";
        for (std::size_t j = 0; j < cols_; ++j) out += (j ? ", " : "") + (*this)(i, j).str();
    }
    return out + "]";
}

}  // namespace fdiff
