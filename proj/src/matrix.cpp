#include "normform/matrix.hpp"

#include <algorithm>
#include <utility>

namespace normform {

IntMatrix IntMatrix::from_rows(const std::vector<IntVec>& rs)
{
    IntMatrix m(rs.size(), rs.empty() ? 0 : rs[0].size());
    for (size_t i = 0; i < m.rows; ++i) m.set_row(i, rs[i]);
    return m;
}

IntMatrix IntMatrix::identity(size_t n)
{
    IntMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

std::vector<IntVec> IntMatrix::to_rows() const
{
    std::vector<IntVec> r(rows);
    for (size_t i = 0; i < rows; ++i) r[i] = row(i);
    return r;
}

IntMatrix IntMatrix::transpose() const
{
    IntMatrix t(cols, rows);
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
}

IntMatrix operator*(const IntMatrix& x, const IntMatrix& y)
{
    IntMatrix r(x.rows, y.cols);
    for (size_t i = 0; i < x.rows; ++i)
        for (size_t l = 0; l < x.cols; ++l) {
            if (x(i, l) == 0) continue;
            for (size_t j = 0; j < y.cols; ++j) r(i, j) += x(i, l) * y(l, j);
        }
    return r;
}

IntVec operator*(const IntMatrix& m, const IntVec& v)
{
    IntVec r(m.rows, 0);
    for (size_t i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < m.cols; ++j) r[i] += m(i, j) * v[j];
    return r;
}

Int det(IntMatrix m)
{
    const size_t n = m.rows;
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            size_t piv = k + 1;
            while (piv < n && m(piv, k) == 0) ++piv;
            if (piv == n) return 0;
            for (size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                m(i, j) = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
            }
            m(i, k) = 0;
        }
        prev = m(k, k);
    }
    Int d = m(n - 1, n - 1);
    return sign > 0 ? d : Int(-d);
}

Int minor_det(const IntMatrix& m, const std::vector<size_t>& cols)
{
    IntMatrix s(m.rows, cols.size());
    for (size_t i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < cols.size(); ++j) s(i, j) = m(i, cols[j]);
    return det(std::move(s));
}

size_t rank(IntMatrix m)
{
    size_t r = 0;
    Int prev = 1;
    for (size_t c = 0; c < m.cols && r < m.rows; ++c) {
        size_t piv = r;
        while (piv < m.rows && m(piv, c) == 0) ++piv;
        if (piv == m.rows) continue;
        for (size_t j = 0; j < m.cols; ++j) std::swap(m(r, j), m(piv, j));
        for (size_t i = r + 1; i < m.rows; ++i) {
            for (size_t j = c + 1; j < m.cols; ++j) {
                m(i, j) = m(i, j) * m(r, c) - m(i, c) * m(r, j);
                mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
            }
            m(i, c) = 0;
        }
        prev = m(r, c);
        ++r;
    }
    return r;
}

size_t rank_mod_p(std::vector<std::vector<u64>> m, u64 p)
{
    if (m.empty()) return 0;
    const size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && m[piv][c] % p == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        u64 inv = invmod(m[r][c] % p, p);
        for (size_t i = r + 1; i < rows; ++i) {
            u64 f = mulmod(m[i][c] % p, inv, p);
            if (f == 0) continue;
            for (size_t j = c; j < cols; ++j) m[i][j] = (m[i][j] % p + p - mulmod(f, m[r][j] % p, p)) % p;
        }
        ++r;
    }
    return r;
}

std::vector<u64> left_null_mod_p(const std::vector<std::vector<u64>>& m, u64 p)
{
    // Row-reduce [M | I]; a zero row on the left gives the combination on the right.
    const size_t rows = m.size();
    if (rows == 0) return {};
    const size_t cols = m[0].size();
    std::vector<std::vector<u64>> a(rows, std::vector<u64>(cols + rows, 0));
    for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < cols; ++j) a[i][j] = m[i][j] % p;
        a[i][cols + i] = 1;
    }
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[r], a[piv]);
        u64 inv = invmod(a[r][c], p);
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            u64 f = mulmod(a[i][c], inv, p);
            for (size_t j = 0; j < cols + rows; ++j) a[i][j] = (a[i][j] + p - mulmod(f, a[r][j], p)) % p;
        }
        ++r;
    }
    if (r == rows) return {};
    return std::vector<u64>(a[r].begin() + cols, a[r].end());
}

std::vector<IntVec> integer_nullspace(const IntMatrix& m, std::vector<Int>* scale)
{
    const size_t rows = m.rows, cols = m.cols;
    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols));
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) a[i][j] = m(i, j);
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[r], a[piv]);
        Rational inv = 1 / a[r][c];
        for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(cols, false);
    for (size_t c : pivots) is_pivot[c] = true;
    std::vector<IntVec> out;
    if (scale) scale->clear();
    for (size_t fcol = 0; fcol < cols; ++fcol) {
        if (is_pivot[fcol]) continue;
        std::vector<Rational> x(cols, 0);
        x[fcol] = 1;
        for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = -a[i][fcol];
        Int l = 1;
        for (const auto& q : x) l = lcm(l, Rational(q).get_den());
        IntVec v(cols);
        for (size_t j = 0; j < cols; ++j) {
            Rational t = x[j] * l;
            v[j] = t.get_num();
        }
        Int g = vec_content(v);
        for (auto& e : v) e /= g;
        out.push_back(std::move(v));
        if (scale) scale->push_back(l / g);
    }
    return out;
}

std::vector<std::vector<size_t>> colex_subsets(size_t n, size_t k)
{
    std::vector<std::vector<size_t>> out;
    if (k > n) return out;
    std::vector<size_t> c(k);
    for (size_t i = 0; i < k; ++i) c[i] = i;
    while (true) {
        out.push_back(c);
        // Colex successor: increment the lowest position that can move, reset those below it.
        size_t i = 0;
        while (i < k && c[i] + 1 == (i + 1 < k ? c[i + 1] : n)) ++i;
        if (i == k) break;
        ++c[i];
        for (size_t j = 0; j < i; ++j) c[j] = j;
    }
    return out;
}

}  // namespace normform
