#include "normform/lattice.hpp"

#include "normform/primes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace normform {

WedgeVec maximal_minors(const IntMatrix& m)
{
    WedgeVec w;
    w.subset_size = m.rows;
    for (const auto& cols : colex_subsets(m.cols, m.rows)) w.entries.push_back(minor_det(m, cols));
    return w;
}

WedgeVec wedge(const OrderElement& v, const FieldSpec& ctx) { return maximal_minors(constraint_rows(v, ctx)); }

IntMatrix stacked_constraints(const OrderElement& v1, const OrderElement& v2, const FieldSpec& ctx)
{
    IntMatrix a = constraint_rows(v1, ctx);
    IntMatrix b = constraint_rows(v2, ctx);
    IntMatrix s(a.rows + b.rows, ctx.n);
    for (size_t i = 0; i < a.rows; ++i) s.set_row(i, a.row(i));
    for (size_t i = 0; i < b.rows; ++i) s.set_row(a.rows + i, b.row(i));
    return s;
}

WedgeVec wedge_pair(const OrderElement& v1, const OrderElement& v2, const FieldSpec& ctx)
{
    return maximal_minors(stacked_constraints(v1, v2, ctx));
}

Rational det_squared_formula(const WedgeVec& w)
{
    if (w.is_zero()) throw Error(Errc::ZeroWedge, "wedge vector is zero");
    Int d = w.content();
    Rational r(w.norm2(), d * d);
    r.canonicalize();
    return r;
}

namespace {

std::vector<std::vector<u64>> reduce_rows(const std::vector<IntVec>& b, u64 p)
{
    std::vector<std::vector<u64>> m(b.size());
    for (size_t i = 0; i < b.size(); ++i) {
        m[i].resize(b[i].size());
        for (size_t j = 0; j < b[i].size(); ++j) m[i][j] = mod_of(b[i][j], p);
    }
    return m;
}

// Replace the basis by generators of its saturation, given that the index divides a power of `index_bound`.
void saturate(std::vector<IntVec>& basis, const Int& index_bound)
{
    if (basis.empty() || index_bound == 1) return;
    for (auto& [pz, e] : factor_int(index_bound).factors) {
        (void)e;
        if (!pz.fits_ulong_p() || pz.get_ui() >= (1ULL << 62)) throw Error(Errc::FactorizationBudget, "saturation prime too large");
        u64 p = pz.get_ui();
        while (true) {
            auto red = reduce_rows(basis, p);
            auto c = left_null_mod_p(red, p);
            if (c.empty()) break;
            size_t j = 0;
            while (c[j] == 0) ++j;
            u64 inv = invmod(c[j], p);
            IntVec acc(basis[0].size(), 0);
            for (size_t i = 0; i < basis.size(); ++i) {
                u64 ci = mulmod(c[i], inv, p);
                if (ci == 0) continue;
                for (size_t t = 0; t < acc.size(); ++t) acc[t] += basis[i][t] * static_cast<unsigned long>(ci);
            }
            for (auto& x : acc) mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), p);
            basis[j] = std::move(acc);
        }
    }
}

}  // namespace

IntLattice saturated_kernel(const IntMatrix& m)
{
    std::vector<Int> scale;
    IntLattice L;
    L.ambient_dim = m.cols;
    L.basis = integer_nullspace(m, &scale);
    Int bound = 1;
    for (const auto& s : scale) bound = lcm(bound, s);
    saturate(L.basis, bound);
    if (L.rank() > 1) L.basis = lll_reduce(L.basis);
    return L;
}

IntLattice lambda_v(const OrderElement& v, const FieldSpec& ctx) { return saturated_kernel(constraint_rows(v, ctx)); }

std::variant<IntLattice, DegeneratePair> try_lambda_pair(const OrderElement& v1, const OrderElement& v2, const FieldSpec& ctx)
{
    WedgeVec w = wedge_pair(v1, v2, ctx);
    if (w.is_zero()) return DegeneratePair{w};
    return saturated_kernel(stacked_constraints(v1, v2, ctx));
}

IntLattice lambda_pair(const OrderElement& v1, const OrderElement& v2, const FieldSpec& ctx)
{
    auto r = try_lambda_pair(v1, v2, ctx);
    if (std::holds_alternative<DegeneratePair>(r)) throw Error(Errc::DegeneratePair, "wedge of the pair vanishes");
    return std::get<IntLattice>(r);
}

IntLattice kernel_oracle(const IntMatrix& a0)
{
    IntMatrix a = a0;
    const size_t r = a.rows, n = a.cols;
    IntMatrix u = IntMatrix::identity(n);
    auto col_op = [&](IntMatrix& m, size_t i, size_t j, const Int& s, const Int& t, const Int& x, const Int& y) {
        // (col_i, col_j) <- (s col_i + t col_j, x col_i + y col_j)
        for (size_t row = 0; row < m.rows; ++row) {
            Int ci = m(row, i), cj = m(row, j);
            m(row, i) = s * ci + t * cj;
            m(row, j) = x * ci + y * cj;
        }
    };
    for (size_t i = 0; i < r; ++i) {
        if (i >= n) throw Error(Errc::DependentRows, "more rows than columns");
        for (size_t j = i + 1; j < n; ++j) {
            if (a(i, j) == 0) continue;
            Int g, s, t;
            Int x = a(i, i), y = a(i, j);
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
            Int my = -(y / g), mx = x / g;
            col_op(a, i, j, s, t, my, mx);
            col_op(u, i, j, s, t, my, mx);
        }
        if (a(i, i) == 0) throw Error(Errc::DependentRows, "constraint rows are dependent");
    }
    IntLattice L;
    L.ambient_dim = n;
    for (size_t j = r; j < n; ++j) {
        IntVec v(n);
        for (size_t i = 0; i < n; ++i) v[i] = u(i, j);
        L.basis.push_back(std::move(v));
    }
    return L;
}

Int gram_det(const IntLattice& L)
{
    const size_t r = L.rank();
    IntMatrix g(r, r);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j <= i; ++j) g(i, j) = g(j, i) = dot(L.basis[i], L.basis[j]);
    return det(g);
}

namespace {

// Coordinates of x in the row basis b, or nullopt when x is outside the rational span.
std::optional<std::vector<Rational>> solve_coords(const std::vector<IntVec>& b, const IntVec& x)
{
    const size_t r = b.size(), n = x.size();
    // Augmented n x (r+1) system B^T c = x.
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(r + 1));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < r; ++j) a[i][j] = b[j][i];
        a[i][r] = x[i];
    }
    size_t row = 0;
    std::vector<size_t> piv;
    for (size_t c = 0; c < r && row < n; ++c) {
        size_t p = row;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) continue;
        std::swap(a[row], a[p]);
        Rational inv = 1 / a[row][c];
        for (auto& e : a[row]) e *= inv;
        for (size_t i = 0; i < n; ++i) {
            if (i == row || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (size_t j = 0; j <= r; ++j) a[i][j] -= f * a[row][j];
        }
        piv.push_back(c);
        ++row;
    }
    for (size_t i = row; i < n; ++i)
        if (a[i][r] != 0) return std::nullopt;
    std::vector<Rational> c(r, 0);
    for (size_t i = 0; i < piv.size(); ++i) c[piv[i]] = a[i][r];
    return c;
}

}  // namespace

bool contains(const IntLattice& L, const IntVec& x)
{
    if (is_zero(x)) return true;
    auto c = solve_coords(L.basis, x);
    if (!c) return false;
    for (const auto& q : *c)
        if (q.get_den() != 1) return false;
    return true;
}

bool same_lattice(const IntLattice& a, const IntLattice& b)
{
    if (a.rank() != b.rank() || a.ambient_dim != b.ambient_dim) return false;
    for (const auto& v : a.basis)
        if (!contains(b, v)) return false;
    for (const auto& v : b.basis)
        if (!contains(a, v)) return false;
    return true;
}

IntLattice intersect(const IntLattice& a, const IntLattice& b)
{
    const size_t n = a.ambient_dim, ra = a.rank(), rb = b.rank();
    IntMatrix m(n, ra + rb);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < ra; ++j) m(i, j) = a.basis[j][i];
        for (size_t j = 0; j < rb; ++j) m(i, ra + j) = -b.basis[j][i];
    }
    IntLattice k = saturated_kernel(m);
    IntLattice out;
    out.ambient_dim = n;
    for (const auto& cd : k.basis) {
        IntVec x(n, 0);
        for (size_t j = 0; j < ra; ++j)
            for (size_t i = 0; i < n; ++i) x[i] += cd[j] * a.basis[j][i];
        out.basis.push_back(std::move(x));
    }
    if (out.rank() > 1) out.basis = lll_reduce(out.basis);
    return out;
}

namespace {

struct GramSchmidt {
    std::vector<std::vector<Rational>> mu;
    std::vector<Rational> bstar2;
};

GramSchmidt gram_schmidt(const std::vector<IntVec>& b)
{
    const size_t r = b.size(), n = r ? b[0].size() : 0;
    GramSchmidt gs;
    gs.mu.assign(r, std::vector<Rational>(r, 0));
    gs.bstar2.assign(r, 0);
    std::vector<std::vector<Rational>> bs(r, std::vector<Rational>(n));
    for (size_t i = 0; i < r; ++i) {
        for (size_t t = 0; t < n; ++t) bs[i][t] = b[i][t];
        for (size_t j = 0; j < i; ++j) {
            Rational d = 0;
            for (size_t t = 0; t < n; ++t) d += Rational(b[i][t]) * bs[j][t];
            gs.mu[i][j] = d / gs.bstar2[j];
            for (size_t t = 0; t < n; ++t) bs[i][t] -= gs.mu[i][j] * bs[j][t];
        }
        Rational s = 0;
        for (size_t t = 0; t < n; ++t) s += bs[i][t] * bs[i][t];
        gs.bstar2[i] = s;
    }
    return gs;
}

Int round_rational(const Rational& q)
{
    // floor(q + 1/2)
    Rational h = q + Rational(1, 2);
    Int f;
    mpz_fdiv_q(f.get_mpz_t(), h.get_num_mpz_t(), h.get_den_mpz_t());
    return f;
}

}  // namespace

std::vector<IntVec> lll_reduce(std::vector<IntVec> b)
{
    const size_t r = b.size();
    if (r < 2) return b;
    const Rational delta(99, 100);
    GramSchmidt gs = gram_schmidt(b);
    size_t k = 1;
    while (k < r) {
        for (size_t j = k; j-- > 0;) {
            Int q = round_rational(gs.mu[k][j]);
            if (q == 0) continue;
            for (size_t t = 0; t < b[k].size(); ++t) b[k][t] -= q * b[j][t];
            for (size_t i = 0; i < j; ++i) gs.mu[k][i] -= Rational(q) * gs.mu[j][i];
            gs.mu[k][j] -= q;
        }
        Rational m = gs.mu[k][k - 1];
        if (gs.bstar2[k] >= (delta - m * m) * gs.bstar2[k - 1]) {
            ++k;
        } else {
            std::swap(b[k], b[k - 1]);
            gs = gram_schmidt(b);
            k = std::max<size_t>(k - 1, 1);
        }
    }
    return b;
}

std::vector<ShortVector> short_vectors(const std::vector<IntVec>& basis, const Int& radius2, u64 budget, bool& exhausted)
{
    exhausted = false;
    std::vector<ShortVector> out;
    const size_t r = basis.size();
    if (r == 0) return out;
    const size_t n = basis[0].size();
    GramSchmidt gs = gram_schmidt(basis);
    std::vector<std::vector<long double>> mu(r, std::vector<long double>(r));
    std::vector<long double> bs(r);
    for (size_t i = 0; i < r; ++i) {
        bs[i] = gs.bstar2[i].get_d();
        for (size_t j = 0; j < r; ++j) mu[i][j] = gs.mu[i][j].get_d();
    }
    const long double R = radius2.get_d() * (1 + 1e-9L) + 1e-6L;
    std::vector<long> u(r, 0);
    u64 nodes = 0;
    // Depth-first over levels r-1 .. 0; `higher_zero` restricts to one vector of each +/- pair.
    std::function<void(long, long double, bool)> rec = [&](long i, long double used, bool higher_zero) {
        if (exhausted) return;
        if (++nodes > budget) {
            exhausted = true;
            return;
        }
        long double c = 0;
        for (size_t j = i + 1; j < r; ++j) c -= u[j] * mu[j][i];
        long double rem = R - used;
        if (rem < 0) return;
        long double w = std::sqrt(rem / bs[i]);
        long lo = static_cast<long>(std::ceil(c - w - 1e-9L));
        long hi = static_cast<long>(std::floor(c + w + 1e-9L));
        if (higher_zero) lo = std::max(lo, 0L);
        for (long x = lo; x <= hi; ++x) {
            long double d = x - c;
            long double nu = used + d * d * bs[i];
            if (nu > R) continue;
            u[i] = x;
            bool hz = higher_zero && x == 0;
            if (i == 0) {
                if (hz) continue;
                IntVec v(n, 0);
                for (size_t j = 0; j < r; ++j)
                    if (u[j])
                        for (size_t t = 0; t < n; ++t) v[t] += basis[j][t] * u[j];
                Int nn = norm2(v);
                if (nn <= radius2) out.push_back({std::move(v), nn});
            } else {
                rec(i - 1, nu, hz);
            }
            if (exhausted) break;
        }
        u[i] = 0;
    };
    rec(static_cast<long>(r) - 1, 0, true);
    std::sort(out.begin(), out.end(), [](const ShortVector& a, const ShortVector& b) {
        if (a.norm2 != b.norm2) return a.norm2 < b.norm2;
        return a.x < b.x;
    });
    return out;
}

ReducedBasis reduced_basis(const IntLattice& L, u64 enum_budget)
{
    const size_t r = L.rank();
    if (r > 10) throw Error(Errc::RankTooLarge, "rank above 10");
    ReducedBasis out;
    out.basis = lll_reduce(L.basis);
    std::stable_sort(out.basis.begin(), out.basis.end(), [](const IntVec& a, const IntVec& b) { return norm2(a) < norm2(b); });
    for (const auto& z : out.basis) out.lengths2.push_back(norm2(z));
    if (r == 0) return out;
    Int R = *std::max_element(out.lengths2.begin(), out.lengths2.end());
    bool exhausted = false;
    auto sv = short_vectors(out.basis, R, enum_budget, exhausted);
    if (!exhausted) {
        std::vector<IntVec> chosen;
        for (const auto& s : sv) {
            chosen.push_back(s.x);
            if (rank(IntMatrix::from_rows(chosen)) < chosen.size()) {
                chosen.pop_back();
                continue;
            }
            out.minima2.push_back(s.norm2);
            if (chosen.size() == r) break;
        }
        out.minima_exact = out.minima2.size() == r;
    }
    if (!out.minima_exact) out.minima2 = out.lengths2;

    out.max_length_ratio = 0;
    for (size_t i = 0; i < r; ++i)
        out.max_length_ratio = std::max(out.max_length_ratio, std::sqrt(out.lengths2[i].get_d() / out.minima2[i].get_d()));

    // Dual basis D = (B B^T)^{-1} B gives |l_i| <= ||x|| ||d_i||.
    std::vector<std::vector<Rational>> g(r, std::vector<Rational>(2 * r, 0));
    for (size_t i = 0; i < r; ++i) {
        for (size_t j = 0; j < r; ++j) g[i][j] = dot(out.basis[i], out.basis[j]);
        g[i][r + i] = 1;
    }
    for (size_t c = 0; c < r; ++c) {
        size_t p = c;
        while (g[p][c] == 0) ++p;
        std::swap(g[c], g[p]);
        Rational inv = 1 / g[c][c];
        for (auto& e : g[c]) e *= inv;
        for (size_t i = 0; i < r; ++i) {
            if (i == c || g[i][c] == 0) continue;
            Rational f = g[i][c];
            for (size_t j = 0; j < 2 * r; ++j) g[i][j] -= f * g[c][j];
        }
    }
    double sum = 0;
    for (size_t i = 0; i < r; ++i) {
        // ||d_i||^2 = (G^{-1})_{ii}
        sum += std::sqrt(out.lengths2[i].get_d()) * std::sqrt(g[i][r + i].get_d());
    }
    out.orthogonality = 1.0 / sum;
    double lg = 0;
    for (const auto& l : out.lengths2) lg += 0.5 * std::log2(l.get_d());
    out.log2_defect = lg - 0.5 * std::log2(gram_det(L).get_d());
    return out;
}

namespace {

// Unimodular W with c W = e_1 for a primitive row vector c; returns W^{-1} (whose first row is c).
IntMatrix completion_with_first_row(const IntVec& c0)
{
    const size_t r = c0.size();
    IntMatrix a(1, r);
    for (size_t j = 0; j < r; ++j) a(0, j) = c0[j];
    IntMatrix w = IntMatrix::identity(r);
    auto col_op = [&](IntMatrix& m, size_t i, size_t j, const Int& s, const Int& t, const Int& x, const Int& y) {
        for (size_t row = 0; row < m.rows; ++row) {
            Int ci = m(row, i), cj = m(row, j);
            m(row, i) = s * ci + t * cj;
            m(row, j) = x * ci + y * cj;
        }
    };
    for (size_t j = 1; j < r; ++j) {
        if (a(0, j) == 0) continue;
        Int g, s, t, x = a(0, 0), y = a(0, j);
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
        Int my = -(y / g), mx = x / g;
        col_op(a, 0, j, s, t, my, mx);
        col_op(w, 0, j, s, t, my, mx);
    }
    if (a(0, 0) == -1)
        for (size_t row = 0; row < r; ++row) w(row, 0) = -w(row, 0);
    // Invert W exactly.
    std::vector<std::vector<Rational>> g(r, std::vector<Rational>(2 * r, 0));
    for (size_t i = 0; i < r; ++i) {
        for (size_t j = 0; j < r; ++j) g[i][j] = w(i, j);
        g[i][r + i] = 1;
    }
    for (size_t c = 0; c < r; ++c) {
        size_t p = c;
        while (g[p][c] == 0) ++p;
        std::swap(g[c], g[p]);
        Rational inv = 1 / g[c][c];
        for (auto& e : g[c]) e *= inv;
        for (size_t i = 0; i < r; ++i) {
            if (i == c || g[i][c] == 0) continue;
            Rational f = g[i][c];
            for (size_t j = 0; j < 2 * r; ++j) g[i][j] -= f * g[c][j];
        }
    }
    IntMatrix inv(r, r);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j) inv(i, j) = g[i][r + j].get_num();
    return inv;
}

}  // namespace

NiceBasis nice_basis(const OrderElement& v, const FieldSpec& ctx)
{
    IntLattice L = lambda_v(v, ctx);
    const size_t r = L.rank();
    const size_t t = ctx.pure_theta ? static_cast<size_t>(ctx.k) : static_cast<size_t>(2 * ctx.k - 1);
    if (ctx.k < 1 || t >= r) throw Error(Errc::InvalidArgument, "lattice rank too small for the target index");

    std::vector<IntVec> b = lll_reduce(L.basis);
    Int R = norm2(b[0]);
    for (const auto& z : b) R = std::min(R, norm2(z));
    bool exhausted = false;
    auto sv = short_vectors(b, R, 50000000, exhausted);
    if (exhausted || sv.empty()) throw Error(Errc::BudgetExceeded, "shortest vector enumeration");
    const IntVec s = sv.front().x;
    auto coords = solve_coords(b, s);
    IntVec c(r);
    for (size_t i = 0; i < r; ++i) c[i] = (*coords)[i].get_num();
    IntMatrix v_mat = completion_with_first_row(c);
    IntMatrix bm = v_mat * IntMatrix::from_rows(b);
    std::vector<IntVec> nb = lll_reduce(bm.to_rows());

    NiceBasis out;
    out.target_index = t;
    out.first_minimum2 = sv.front().norm2;
    if (!wedge_pair(nb[0], nb[t], ctx).is_zero()) {
        out.basis = std::move(nb);
        return out;
    }
    for (long bound : {2L, 4L}) {
        // Coefficients for z_2..z_t (z_1 does not affect the wedge), ordered by max-norm then lexicographically.
        const size_t free = t - 1;
        std::vector<std::vector<long>> cand;
        std::vector<long> lam(free, -bound);
        if (free == 0) cand.push_back({});
        else
            while (true) {
                cand.push_back(lam);
                size_t i = 0;
                while (i < free && lam[i] == bound) lam[i++] = -bound;
                if (i == free) break;
                ++lam[i];
            }
        std::stable_sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) {
            long mx = 0, my = 0;
            for (long e : x) mx = std::max(mx, std::labs(e));
            for (long e : y) my = std::max(my, std::labs(e));
            return mx < my;
        });
        for (const auto& l : cand) {
            IntVec z = nb[t];
            for (size_t i = 0; i < free; ++i)
                for (size_t q = 0; q < z.size(); ++q) z[q] += nb[i + 1][q] * l[i];
            if (wedge_pair(nb[0], z, ctx).is_zero()) continue;
            out.lambda.assign(t + 1, 0);
            for (size_t i = 0; i < free; ++i) out.lambda[i + 1] = l[i];
            out.lambda[t] = 1;
            nb[t] = z;
            out.basis = std::move(nb);
            return out;
        }
    }
    throw Error(Errc::SearchExhausted, "no replacement vector with bounded coefficients");
}

std::vector<IntVec> tight_subspace(const OrderElement& v, const FieldSpec& ctx)
{
    if (!ctx.pure_theta) throw Error(Errc::InvalidArgument, "tight subspace needs a pure field");
    std::vector<IntVec> out;
    IntVec t = reversed(v);
    for (int i = 0; i < ctx.k; ++i) {
        out.push_back(reversed(t));
        t = t_map(t, *ctx.pure_theta);
    }
    return out;
}

nlohmann::json to_json(const IntLattice& L)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& b : L.basis) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& x : b) {
            if (x.fits_slong_p()) row.push_back(x.get_si());
            else row.push_back(x.get_str());
        }
        rows.push_back(row);
    }
    return {{"ambient_dim", L.ambient_dim}, {"rank", L.rank()}, {"basis", rows}};
}

}  // namespace normform
