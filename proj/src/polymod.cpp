#include "normform/polymod.hpp"

#include <algorithm>
#include <random>

namespace normform {

void poly_trim(PolyP& a)
{
    while (!a.empty() && a.back() == 0) a.pop_back();
}

PolyP poly_reduce(const IntVec& f, u64 p)
{
    PolyP r(f.size());
    for (size_t i = 0; i < f.size(); ++i) r[i] = mod_of(f[i], p);
    poly_trim(r);
    return r;
}

PolyP poly_mul(const PolyP& a, const PolyP& b, u64 p)
{
    if (a.empty() || b.empty()) return {};
    PolyP r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
    }
    poly_trim(r);
    return r;
}

PolyP poly_sub(const PolyP& a, const PolyP& b, u64 p)
{
    PolyP r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
        u64 x = i < a.size() ? a[i] : 0;
        u64 y = i < b.size() ? b[i] : 0;
        r[i] = (x + p - y) % p;
    }
    poly_trim(r);
    return r;
}

namespace {

// Long division; returns quotient and leaves the remainder in a.
PolyP divide(PolyP& a, const PolyP& m, u64 p)
{
    poly_trim(a);
    if (m.empty()) throw Error(Errc::InvalidArgument, "division by zero polynomial");
    if (a.size() < m.size()) return {};
    PolyP q(a.size() - m.size() + 1, 0);
    u64 inv = invmod(m.back(), p);
    for (size_t i = a.size(); i-- >= m.size();) {
        u64 c = mulmod(a[i], inv, p);
        q[i - m.size() + 1] = c;
        if (c == 0) continue;
        for (size_t j = 0; j < m.size(); ++j) {
            size_t idx = i - m.size() + 1 + j;
            a[idx] = (a[idx] + p - mulmod(c, m[j], p)) % p;
        }
    }
    poly_trim(a);
    poly_trim(q);
    return q;
}

}  // namespace

PolyP poly_rem(PolyP a, const PolyP& m, u64 p)
{
    divide(a, m, p);
    return a;
}

PolyP poly_div(PolyP a, const PolyP& m, u64 p) { return divide(a, m, p); }

PolyP poly_monic(PolyP a, u64 p)
{
    if (a.empty()) return a;
    u64 inv = invmod(a.back(), p);
    for (auto& c : a) c = mulmod(c, inv, p);
    return a;
}

PolyP poly_gcd(PolyP a, PolyP b, u64 p)
{
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        PolyP r = poly_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(a, p);
}

PolyP poly_powmod(PolyP base, const Int& e, const PolyP& m, u64 p)
{
    PolyP r{1 % p};
    poly_trim(r);
    base = poly_rem(base, m, p);
    size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t i = bits; i-- > 0;) {
        r = poly_rem(poly_mul(r, r, p), m, p);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = poly_rem(poly_mul(r, base, p), m, p);
    }
    if (e == 0) r = poly_rem(r, m, p);
    return r;
}

PolyP poly_derivative(const PolyP& a, u64 p)
{
    PolyP r;
    for (size_t i = 1; i < a.size(); ++i) r.push_back(mulmod(a[i], i % p, p));
    poly_trim(r);
    return r;
}

u64 poly_eval(const PolyP& a, u64 x, u64 p)
{
    u64 r = 0;
    for (size_t i = a.size(); i-- > 0;) r = (mulmod(r, x, p) + a[i]) % p;
    return r;
}

std::vector<int> distinct_degree_counts(const PolyP& f, u64 p)
{
    const int n = poly_deg(f);
    std::vector<int> count(n + 1, 0);
    PolyP x{0, 1};
    PolyP xp = x;  // x^{p^d} mod f
    for (int d = 1; d <= n; ++d) {
        xp = poly_powmod(xp, Int(static_cast<unsigned long>(p)), f, p);
        int h = poly_deg(poly_gcd(f, poly_sub(xp, x, p), p));
        int known = 0;
        for (int e = 1; e < d; ++e)
            if (d % e == 0) known += e * count[e];
        count[d] = (h - known) / d;
    }
    return count;
}

namespace {

// Splits a squarefree product of degree-d irreducibles into its factors.
void equal_degree_split(const PolyP& h, int d, u64 p, std::mt19937_64& rng, std::vector<PolyP>& out)
{
    const int deg = poly_deg(h);
    if (deg == d) {
        out.push_back(h);
        return;
    }
    Int q = 1;
    for (int i = 0; i < d; ++i) q *= static_cast<unsigned long>(p);
    if (q <= 4096) {
        // Enumerate monic degree-d candidates.
        PolyP rest = h;
        u64 total = static_cast<u64>(q.get_ui());
        for (u64 code = 0; code < total && poly_deg(rest) > 0; ++code) {
            PolyP c(d + 1, 0);
            u64 t = code;
            for (int i = 0; i < d; ++i) {
                c[i] = t % p;
                t /= p;
            }
            c[d] = 1;
            if (poly_rem(rest, c, p).empty()) {
                out.push_back(c);
                rest = poly_div(rest, c, p);
            }
        }
        return;
    }
    Int e = (q - 1) / 2;
    while (true) {
        PolyP a(deg);
        for (auto& c : a) c = rng() % p;
        poly_trim(a);
        if (poly_deg(a) < 1) continue;
        PolyP g = poly_gcd(h, a, p);
        if (poly_deg(g) > 0 && poly_deg(g) < deg) {
            equal_degree_split(g, d, p, rng, out);
            equal_degree_split(poly_div(h, g, p), d, p, rng, out);
            return;
        }
        PolyP b = poly_sub(poly_powmod(a, e, h, p), PolyP{1}, p);
        g = poly_gcd(h, b, p);
        if (poly_deg(g) > 0 && poly_deg(g) < deg) {
            equal_degree_split(g, d, p, rng, out);
            equal_degree_split(poly_div(h, g, p), d, p, rng, out);
            return;
        }
    }
}

}  // namespace

std::vector<ModpFactor> factor_modp(const PolyP& f0, u64 p)
{
    PolyP f = poly_monic(f0, p);
    const int n = poly_deg(f);
    std::vector<ModpFactor> out;
    std::mt19937_64 rng(p * 0x9e3779b97f4a7c15ULL + 17);
    PolyP x{0, 1};
    PolyP xp = x;
    PolyP rest = f;
    for (int d = 1; d <= n && poly_deg(rest) > 0; ++d) {
        xp = poly_powmod(xp, Int(static_cast<unsigned long>(p)), f, p);
        PolyP h = poly_gcd(rest, poly_sub(xp, x, p), p);
        if (poly_deg(h) <= 0) continue;
        // gcd with x^{p^d}-x is squarefree, and contains only degree-d factors once lower degrees are removed.
        std::vector<PolyP> parts;
        equal_degree_split(h, d, p, rng, parts);
        for (auto& g : parts) {
            unsigned mult = 0;
            while (poly_deg(rest) > 0 && poly_rem(rest, g, p).empty()) {
                rest = poly_div(rest, g, p);
                ++mult;
            }
            out.push_back({g, mult});
        }
    }
    std::sort(out.begin(), out.end(), [](const ModpFactor& a, const ModpFactor& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return std::lexicographical_compare(a.g.rbegin(), a.g.rend(), b.g.rbegin(), b.g.rend());
    });
    return out;
}

namespace {

PolyP linear_part(const PolyP& f, u64 p)
{
    PolyP x{0, 1};
    return poly_gcd(f, poly_sub(poly_powmod(x, Int(static_cast<unsigned long>(p)), f, p), x, p), p);
}

}  // namespace

int count_roots_modp(const PolyP& f, u64 p)
{
    if (poly_deg(f) < 1) return 0;
    return poly_deg(linear_part(f, p));
}

std::vector<u64> roots_modp(const PolyP& f, u64 p)
{
    std::vector<u64> r;
    if (poly_deg(f) < 1) return r;
    PolyP g = linear_part(f, p);
    if (poly_deg(g) < 1) return r;
    for (const auto& fac : factor_modp(g, p))
        if (fac.degree() == 1) r.push_back((p - fac.g[0]) % p);
    std::sort(r.begin(), r.end());
    return r;
}

}  // namespace normform
