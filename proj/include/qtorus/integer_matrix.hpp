#pragma once

#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "qtorus/errors.hpp"

namespace qtorus {

using Int = mpz_class;
using Rat = mpq_class;

// Dense row-major matrix over arbitrary-precision integers.  Everything in
// this project that touches a matrix is exact; there is no floating point
// anywhere.  Row/column counts of zero are legal and arise naturally
// (empty generating sets, kernels of empty condition stacks).
class IntegerMatrix {
  public:
    IntegerMatrix() = default;

    IntegerMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    IntegerMatrix(std::initializer_list<std::initializer_list<long>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                fail(ErrorKind::internal, "ragged initializer for IntegerMatrix");
            for (long v : r) data_.emplace_back(v);
        }
    }

    static IntegerMatrix identity(std::size_t n) {
        IntegerMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static IntegerMatrix from_rows(std::vector<std::vector<Int>> rows, std::size_t cols) {
        IntegerMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols)
                fail(ErrorKind::internal, "row length mismatch in from_rows");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = std::move(rows[i][j]);
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<Int> row(std::size_t i) const {
        return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
    }

    bool is_zero() const {
        for (const Int& v : data_)
            if (v != 0) return false;
        return true;
    }

    bool is_square() const noexcept { return rows_ == cols_; }

    IntegerMatrix transpose() const {
        IntegerMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    IntegerMatrix operator*(const IntegerMatrix& rhs) const {
        if (cols_ != rhs.rows_)
            fail(ErrorKind::internal, "dimension mismatch in matrix product");
        IntegerMatrix p(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Int& a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j)
                    p(i, j) += a * rhs(k, j);
            }
        return p;
    }

    // A . v for a column vector v.
    std::vector<Int> mul_vec(const std::vector<Int>& v) const {
        if (v.size() != cols_)
            fail(ErrorKind::internal, "dimension mismatch in matrix-vector product");
        std::vector<Int> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    friend bool operator==(const IntegerMatrix& a, const IntegerMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const IntegerMatrix& a, const IntegerMatrix& b) { return !(a == b); }

    // Lexicographic order on (rows, cols, entries); used for deterministic
    // tie-breaking between canonical bases.
    friend bool operator<(const IntegerMatrix& a, const IntegerMatrix& b) {
        if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
        if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
        return a.data_ < b.data_;
    }

    // elementary row operations (mirrored on transforms by the callers)
    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < cols_; ++k)
            std::swap((*this)(i, k), (*this)(j, k));
    }
    void negate_row(std::size_t i) {
        for (std::size_t k = 0; k < cols_; ++k) (*this)(i, k) = -(*this)(i, k);
    }
    // row i -= q * row j
    void submul_row(std::size_t i, std::size_t j, const Int& q) {
        if (q == 0) return;
        for (std::size_t k = 0; k < cols_; ++k)
            (*this)(i, k) -= q * (*this)(j, k);
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < rows_; ++k)
            std::swap((*this)(k, i), (*this)(k, j));
    }
    void negate_col(std::size_t i) {
        for (std::size_t k = 0; k < rows_; ++k) (*this)(k, i) = -(*this)(k, i);
    }
    // col i -= q * col j
    void submul_col(std::size_t i, std::size_t j, const Int& q) {
        if (q == 0) return;
        for (std::size_t k = 0; k < rows_; ++k)
            (*this)(k, i) -= q * (*this)(k, j);
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            os << (i ? "; " : "");
            for (std::size_t j = 0; j < cols_; ++j)
                os << (j ? " " : "") << (*this)(i, j).get_str();
        }
        os << "]";
        return os.str();
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> data_;
};

// Vertical concatenation; both operands must share a column count.
inline IntegerMatrix stack_rows(const IntegerMatrix& a, const IntegerMatrix& b) {
    if (a.cols() != b.cols())
        fail(ErrorKind::length_mismatch, "stacked matrices must have the same column count");
    IntegerMatrix s(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) s(a.rows() + i, j) = b(i, j);
    return s;
}

inline IntegerMatrix append_row(const IntegerMatrix& a, const std::vector<Int>& v) {
    return stack_rows(a, IntegerMatrix::from_rows({v}, a.cols()));
}

}  // namespace qtorus
