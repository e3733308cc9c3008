#include "normform/field.hpp"

#include "normform/polymod.hpp"
#include "normform/primes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace normform {

namespace {

bool has_rational_root(const IntVec& f)
{
    if (f[0] == 0) return true;
    auto eval = [&](const Int& x) {
        Int r = 0;
        for (size_t i = f.size(); i-- > 0;) r = r * x + f[i];
        return r;
    };
    auto fac = factor_int(f[0]);
    std::vector<Int> divs{1};
    for (auto& [p, e] : fac.factors) {
        size_t cur = divs.size();
        Int pk = 1;
        for (unsigned i = 0; i < e; ++i) {
            pk *= p;
            for (size_t j = 0; j < cur; ++j) divs.push_back(divs[j] * pk);
        }
    }
    for (const auto& d : divs)
        if (eval(d) == 0 || eval(-d) == 0) return true;
    return false;
}

// Degrees of proper factors over Q compatible with the splitting pattern at a good prime.
std::set<int> feasible_factor_degrees(const std::vector<int>& counts, int n)
{
    std::vector<bool> reach(n + 1, false);
    reach[0] = true;
    for (int d = 1; d <= n; ++d)
        for (int c = 0; c < counts[d]; ++c)
            for (int s = n; s >= d; --s)
                if (reach[s - d]) reach[s] = true;
    std::set<int> out;
    for (int s = 1; s < n; ++s)
        if (reach[s]) out.insert(s);
    return out;
}

}  // namespace

Int discriminant(const IntVec& f)
{
    const int n = static_cast<int>(f.size()) - 1;
    IntVec fp(n);
    for (int i = 1; i <= n; ++i) fp[i - 1] = f[i] * i;
    // Sylvester matrix of f (degree n) and f' (degree n-1), coefficients from the top.
    const int sz = 2 * n - 1;
    IntMatrix s(sz, sz);
    for (int r = 0; r < n - 1; ++r)
        for (int i = 0; i <= n; ++i) s(r, r + i) = f[n - i];
    for (int r = 0; r < n; ++r)
        for (int i = 0; i <= n - 1; ++i) s(n - 1 + r, r + i) = fp[n - 1 - i];
    Int res = det(s);
    if ((n * (n - 1) / 2) % 2 == 1) res = -res;
    return res;
}

FieldSpec make_context(const IntVec& f, int k)
{
    if (f.size() < 2 || f.back() != 1) throw Error(Errc::NonMonic, "leading coefficient must be 1");
    const int n = static_cast<int>(f.size()) - 1;
    if (n < 2) throw Error(Errc::DegenerateDegree, "degree must be at least 2");
    if (k < 0 || k >= n) throw Error(Errc::InvalidArgument, "k must satisfy 0 <= k < n");
    FieldSpec ctx;
    ctx.n = n;
    ctx.k = k;
    ctx.f = f;
    ctx.disc = discriminant(f);
    if (ctx.disc == 0) throw Error(Errc::ReducibleDetected, "repeated factor");
    if (has_rational_root(f)) throw Error(Errc::ReducibleDetected, "rational root");
    bool pure = true;
    for (int i = 1; i < n; ++i)
        if (f[i] != 0) pure = false;
    if (pure) ctx.pure_theta = Int(-f[0]);

    std::set<int> feasible;
    for (int d = 1; d < n; ++d) feasible.insert(d);
    int used = 0;
    for (u64 p = 2; used < 25 && !feasible.empty(); ++p) {
        if (!is_prime_u64(p) || mpz_divisible_ui_p(ctx.disc.get_mpz_t(), p)) continue;
        ++used;
        auto counts = distinct_degree_counts(poly_reduce(f, p), p);
        auto fd = feasible_factor_degrees(counts, n);
        std::set<int> inter;
        std::set_intersection(feasible.begin(), feasible.end(), fd.begin(), fd.end(), std::inserter(inter, inter.begin()));
        feasible = std::move(inter);
    }
    ctx.irreducibility_certified = feasible.empty();
    return ctx;
}

FieldSpec make_context(const std::vector<long>& f, int k) { return make_context(to_int_vec(f), k); }

nlohmann::json to_json(const FieldSpec& ctx)
{
    nlohmann::json f = nlohmann::json::array();
    for (const auto& c : ctx.f) {
        if (c.fits_slong_p()) f.push_back(c.get_si());
        else f.push_back(c.get_str());
    }
    return {{"f", f}, {"k", ctx.k}};
}

FieldSpec field_from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("f") || !j.contains("k")) throw Error(Errc::InvalidArgument, "field needs keys f and k");
    IntVec f;
    for (const auto& c : j.at("f")) {
        if (c.is_string()) f.emplace_back(c.get<std::string>());
        else if (c.is_number_integer()) f.emplace_back(static_cast<long>(c.get<long long>()));
        else throw Error(Errc::InvalidArgument, "f coefficients must be integers");
    }
    if (!j.at("k").is_number_integer()) throw Error(Errc::InvalidArgument, "k must be an integer");
    return make_context(f, j.at("k").get<int>());
}

IntVec reversed(const IntVec& v) { return IntVec(v.rbegin(), v.rend()); }

IntVec t_map(const IntVec& v, const Int& theta)
{
    IntVec r(v.size());
    for (size_t j = 0; j + 1 < v.size(); ++j) r[j] = v[j + 1];
    r.back() = theta * v[0];
    return r;
}

OrderElement diamond(const OrderElement& a, const OrderElement& b, const FieldSpec& ctx)
{
    const int n = ctx.n;
    OrderElement c(n, 0);
    if (ctx.pure_theta) {
        // c_j = T^{n-j}(rev b) . a
        const Int& th = *ctx.pure_theta;
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i <= j; ++i) c[j] += a[i] * b[j - i];
            Int wrap = 0;
            for (int i = j + 1; i < n; ++i) wrap += a[i] * b[n + j - i];
            c[j] += th * wrap;
        }
        return c;
    }
    IntVec prod(2 * n - 1, 0);
    for (int i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < n; ++j) prod[i + j] += a[i] * b[j];
    }
    for (int d = 2 * n - 2; d >= n; --d) {
        if (prod[d] == 0) continue;
        Int q = prod[d];
        for (int j = 0; j < n; ++j) prod[d - n + j] -= q * ctx.f[j];
        prod[d] = 0;
    }
    std::copy(prod.begin(), prod.begin() + n, c.begin());
    return c;
}

IntMatrix mul_matrix(const OrderElement& v, const FieldSpec& ctx)
{
    const int n = ctx.n;
    IntMatrix m(n, n);
    OrderElement e(n, 0);
    for (int i = 0; i < n; ++i) {
        e[i] = 1;
        OrderElement col = diamond(e, v, ctx);
        e[i] = 0;
        for (int r = 0; r < n; ++r) m(r, i) = col[r];
    }
    return m;
}

Int norm(const OrderElement& v, const FieldSpec& ctx) { return det(mul_matrix(v, ctx)); }

OrderElement embed(const IncompleteVec& x, const FieldSpec& ctx)
{
    OrderElement v(ctx.n, 0);
    std::copy(x.begin(), x.end(), v.begin());
    return v;
}

Int norm_form(const IncompleteVec& x, const FieldSpec& ctx) { return norm(embed(x, ctx), ctx); }

IntMatrix constraint_rows(const OrderElement& v, const FieldSpec& ctx)
{
    if (is_zero(v)) throw Error(Errc::ZeroVector, "constraint rows of the zero vector");
    const int n = ctx.n, k = ctx.k;
    IntMatrix rows(k, n);
    if (ctx.pure_theta) {
        IntVec t = reversed(v);
        for (int s = 0; s < k; ++s) {
            rows.set_row(k - 1 - s, t);
            t = t_map(t, *ctx.pure_theta);
        }
        return rows;
    }
    IntMatrix m = mul_matrix(v, ctx);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < n; ++j) rows(i, j) = m(n - k + i, j);
    return rows;
}

NormPoly::NormPoly(const FieldSpec& ctx) : vars_(ctx.m()), degree_(ctx.n)
{
    const int n = ctx.n;
    using Poly = std::map<std::vector<int>, Int>;
    // Entry (r, c) of the multiplication matrix as a linear form in x_1..x_m.
    std::vector<std::vector<IntVec>> lin(n, std::vector<IntVec>(n, IntVec(vars_, 0)));
    for (int j = 0; j < vars_; ++j) {
        OrderElement e(n, 0);
        e[j] = 1;
        IntMatrix mj = mul_matrix(e, ctx);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) lin[r][c][j] = mj(r, c);
    }
    std::vector<Poly> dp(size_t(1) << n);
    dp[0][std::vector<int>(vars_, 0)] = 1;
    for (size_t s = 0; s < dp.size(); ++s) {
        if (dp[s].empty()) continue;
        const int r = __builtin_popcountll(s);
        if (r == n) continue;
        for (int c = 0; c < n; ++c) {
            if (s & (size_t(1) << c)) continue;
            int above = __builtin_popcountll(s >> (c + 1));
            Poly& tgt = dp[s | (size_t(1) << c)];
            for (int j = 0; j < vars_; ++j) {
                const Int& lc = lin[r][c][j];
                if (lc == 0) continue;
                for (const auto& [ex, co] : dp[s]) {
                    auto e2 = ex;
                    ++e2[j];
                    Int v = co * lc;
                    if (above % 2) v = -v;
                    tgt[e2] += v;
                }
            }
        }
        if (r > 0) Poly().swap(dp[s]);
    }
    for (const auto& [ex, co] : dp.back()) {
        if (co == 0) continue;
        exps_.push_back(ex);
        coeffs_.push_back(co);
        coeffs128_.push_back(fits_i128(co) ? to_i128(co) : 0);
        coeffs_real_.push_back(static_cast<long double>(co.get_d()));
    }
}

Int NormPoly::eval(const IntVec& x) const
{
    Int s = 0;
    for (size_t t = 0; t < coeffs_.size(); ++t) {
        Int term = coeffs_[t];
        for (int j = 0; j < vars_; ++j) {
            if (exps_[t][j] == 0) continue;
            Int pw;
            mpz_pow_ui(pw.get_mpz_t(), x[j].get_mpz_t(), exps_[t][j]);
            term *= pw;
        }
        s += term;
    }
    return s;
}

i128 NormPoly::eval_i128(const i64* x, bool& ok) const
{
    ok = true;
    i128 pw[16][16];
    for (int j = 0; j < vars_; ++j) {
        pw[j][0] = 1;
        for (int e = 1; e <= degree_; ++e)
            if (__builtin_mul_overflow(pw[j][e - 1], static_cast<i128>(x[j]), &pw[j][e])) ok = false;
    }
    if (!ok) return 0;
    i128 s = 0;
    for (size_t t = 0; t < coeffs_.size(); ++t) {
        if (coeffs128_[t] == 0) {
            ok = false;
            return 0;
        }
        i128 term = coeffs128_[t];
        for (int j = 0; j < vars_; ++j)
            if (exps_[t][j] && __builtin_mul_overflow(term, pw[j][exps_[t][j]], &term)) {
                ok = false;
                return 0;
            }
        if (__builtin_add_overflow(s, term, &s)) {
            ok = false;
            return 0;
        }
    }
    return s;
}

u64 NormPoly::eval_mod(const u64* x, u64 p) const { return eval_mod(x, p, coeffs_mod(p)); }

std::vector<u64> NormPoly::coeffs_mod(u64 p) const
{
    std::vector<u64> c(coeffs_.size());
    for (size_t t = 0; t < c.size(); ++t) c[t] = mod_of(coeffs_[t], p);
    return c;
}

u64 NormPoly::eval_mod(const u64* x, u64 p, const std::vector<u64>& cmod) const
{
    u64 pw[16][16];
    u64 s = 0;
    if (p < (1ULL << 32)) {
        for (int j = 0; j < vars_; ++j) {
            pw[j][0] = 1 % p;
            for (int e = 1; e <= degree_; ++e) pw[j][e] = pw[j][e - 1] * (x[j] % p) % p;
        }
        for (size_t t = 0; t < cmod.size(); ++t) {
            u64 term = cmod[t];
            for (int j = 0; j < vars_; ++j)
                if (exps_[t][j]) term = term * pw[j][exps_[t][j]] % p;
            s += term;
        }
        return s % p;
    }
    for (int j = 0; j < vars_; ++j) {
        pw[j][0] = 1 % p;
        for (int e = 1; e <= degree_; ++e) pw[j][e] = mulmod(pw[j][e - 1], x[j] % p, p);
    }
    for (size_t t = 0; t < cmod.size(); ++t) {
        u64 term = cmod[t];
        for (int j = 0; j < vars_; ++j)
            if (exps_[t][j]) term = mulmod(term, pw[j][exps_[t][j]], p);
        s += term;
        if (s >= p) s -= p;
    }
    return s;
}

long double NormPoly::eval_real(const long double* t) const
{
    long double s = 0;
    for (size_t i = 0; i < coeffs_real_.size(); ++i) {
        long double term = coeffs_real_[i];
        for (int j = 0; j < vars_; ++j)
            for (int e = 0; e < exps_[i][j]; ++e) term *= t[j];
        s += term;
    }
    return s;
}

long double NormPoly::abs_bound(const std::vector<long double>& bound) const
{
    long double s = 0;
    for (size_t i = 0; i < coeffs_real_.size(); ++i) {
        long double term = std::fabs(coeffs_real_[i]);
        for (int j = 0; j < vars_; ++j) term *= std::pow(bound[j], static_cast<long double>(exps_[i][j]));
        s += term;
    }
    return s;
}

}  // namespace normform
