#pragma once

#include "normform/core.hpp"

#include <vector>

namespace normform {

struct IntMatrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<Int> a;

    IntMatrix() = default;
    IntMatrix(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0) {}

    Int& operator()(size_t i, size_t j) { return a[i * cols + j]; }
    const Int& operator()(size_t i, size_t j) const { return a[i * cols + j]; }

    IntVec row(size_t i) const { return IntVec(a.begin() + i * cols, a.begin() + (i + 1) * cols); }
    void set_row(size_t i, const IntVec& v)
    {
        for (size_t j = 0; j < cols; ++j) (*this)(i, j) = v[j];
    }

    static IntMatrix from_rows(const std::vector<IntVec>& rs);
    static IntMatrix identity(size_t n);
    std::vector<IntVec> to_rows() const;
    IntMatrix transpose() const;
    bool operator==(const IntMatrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

IntMatrix operator*(const IntMatrix& x, const IntMatrix& y);
IntVec operator*(const IntMatrix& m, const IntVec& v);

// Fraction-free Gaussian elimination; exact determinant of a square matrix.
Int det(IntMatrix m);

// Determinant of the square submatrix with the given column indices.
Int minor_det(const IntMatrix& m, const std::vector<size_t>& cols);

size_t rank(IntMatrix m);

// Rank of a matrix reduced mod a prime p < 2^63.
size_t rank_mod_p(std::vector<std::vector<u64>> m, u64 p);

// Nonzero left null vector c (c·rows ≡ 0 mod p) of a matrix with rank < rows; empty if none.
std::vector<u64> left_null_mod_p(const std::vector<std::vector<u64>>& m, u64 p);

// Rational basis of {x : m x = 0}, one vector per free column, scaled to primitive integer vectors.
// `scale` receives for each vector the factor by which the identity-normalized rational vector was multiplied.
std::vector<IntVec> integer_nullspace(const IntMatrix& m, std::vector<Int>* scale = nullptr);

// Colexicographic enumeration of k-subsets of {0..n-1}.
std::vector<std::vector<size_t>> colex_subsets(size_t n, size_t k);

}  // namespace normform
