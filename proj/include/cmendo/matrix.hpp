#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

#include "cmendo/arith.hpp"

namespace cmendo {

template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), data_(r * c, T(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
    }
    void set_row(std::size_t i, const std::vector<T>& v) {
        assert(v.size() == cols_);
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
    }
    void append_row(const std::vector<T>& v) {
        if (rows_ == 0 && cols_ == 0) cols_ = v.size();
        assert(v.size() == cols_);
        data_.insert(data_.end(), v.begin(), v.end());
        ++rows_;
    }
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        assert(a.cols_ == b.rows_);
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& x = a(i, k);
                if (x == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
            }
        return c;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

RatMatrix to_rat(const IntMatrix& m);
// Row vector times matrix.
RatVec vec_mul(const RatVec& v, const RatMatrix& m);
IntVec vec_mul(const IntVec& v, const IntMatrix& m);

/// Incremental row-style Hermite normal form.  Pivot columns strictly
/// increase down the rows, pivots are positive, and entries above a pivot
/// lie in [0, pivot).  Once the lattice has full rank its determinant is
/// used as a modulus for incoming vectors.
class HnfBuilder {
public:
    explicit HnfBuilder(std::size_t ncols, bool use_modulus = false);

    // Returns true when the generated lattice grew.
    bool insert(IntVec v);
    std::size_t rank() const { return rank_; }
    std::size_t cols() const { return n_; }
    bool full_rank() const { return rank_ == n_; }
    // Product of pivots; meaningful when full rank.
    Int determinant() const;
    IntMatrix matrix() const;
    // Pivot column of each row of matrix(), in order.
    std::vector<std::size_t> pivots() const;

private:
    void normalize();
    void reduce_mod(IntVec& v) const;

    std::size_t n_;
    bool use_modulus_;
    std::size_t rank_ = 0;
    Int modulus_ = 0;
    std::vector<IntVec> rows_;  // indexed by pivot column; empty if none
};

struct HnfResult {
    IntMatrix H;
    std::size_t rank;
};

HnfResult hnf_rows(const IntMatrix& M);
HnfResult hnf_rows(const RatMatrix& M);

// Rows of the returned matrix form a basis of {x in Z^m : x*A = 0}.
IntMatrix left_kernel(const IntMatrix& A);

struct SmithResult {
    std::vector<Int> diag;  // d_1 | d_2 | ... (length n, may contain 1s)
    IntMatrix U, V;         // U * M * V = diag(d)
};
SmithResult smith(const IntMatrix& M);

Rat det(const RatMatrix& M);
Int det(const IntMatrix& M);
RatMatrix inverse(const RatMatrix& M);  // throws DivisionByZero if singular
std::size_t rank(const RatMatrix& M);

// Rows form a basis of {x in Q^k : M x in Z^m} for M of shape m x k with
// rank k; computed as the columns of d H^{-1} with H the row HNF of dM.
RatMatrix integral_solutions(const RatMatrix& M);

Int common_denominator(const RatMatrix& M);

}  // namespace cmendo
