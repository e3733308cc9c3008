#include "normform/primes.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace normform {

std::vector<u64> primes_up_to(u64 limit)
{
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<bool> comp(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) comp[j] = true;
    }
    return out;
}

std::vector<std::uint32_t> smallest_prime_factors(std::uint32_t limit)
{
    std::vector<std::uint32_t> spf(static_cast<size_t>(limit) + 1, 0);
    std::vector<std::uint32_t> ps;
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (spf[i] == 0) {
            spf[i] = i;
            ps.push_back(i);
        }
        for (std::uint32_t p : ps) {
            u64 m = static_cast<u64>(p) * i;
            if (p > spf[i] || m > limit) break;
            spf[m] = p;
        }
    }
    return spf;
}

namespace {

bool sprp_u64(u64 n, u64 a)
{
    a %= n;
    if (a == 0) return true;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

bool sprp_mpz(const Int& n, const Int& a)
{
    Int d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    d >>= s;
    Int x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    Int nm1 = n - 1;
    if (x == 1 || x == nm1) return true;
    for (unsigned long i = 1; i < s; ++i) {
        x = x * x % n;
        if (x == nm1) return true;
    }
    return false;
}

constexpr unsigned kSmallPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

}  // namespace

bool is_prime_u64(u64 n)
{
    if (n < 2) return false;
    for (unsigned p : kSmallPrimes) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    if (n < 1681) return true;
    for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL})
        if (!sprp_u64(n, a)) return false;
    return true;
}

PrimalityResult is_prime(const Int& n)
{
    if (n < 2) return {false, false};
    if (n.fits_ulong_p()) return {is_prime_u64(n.get_ui()), false};
    for (unsigned p : kSmallPrimes)
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return {false, false};
    static const Int kDeterministicBound("3317044064679887385961981");
    if (n < kDeterministicBound) {
        for (unsigned p : kSmallPrimes)
            if (!sprp_mpz(n, Int(p))) return {false, false};
        return {true, false};
    }
    std::mt19937_64 rng(0x5eed);
    gmp_randclass gr(gmp_randinit_default);
    gr.seed(static_cast<unsigned long>(rng()));
    for (int i = 0; i < 64; ++i) {
        Int a = gr.get_z_range(n - 3) + 2;
        if (!sprp_mpz(n, a)) return {false, false};
    }
    return {true, true};
}

namespace {

u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

u64 rho(u64 n)
{
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        u64 r = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        const u64 m = 128;
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = gcd_u64(q, n);
                k += m;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd_u64(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_rec(u64 n, std::map<u64, unsigned>& out)
{
    if (n == 1) return;
    if (is_prime_u64(n)) {
        ++out[n];
        return;
    }
    u64 d = rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

Factorization factor_u64(u64 n)
{
    std::map<u64, unsigned> out;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        while (n % p == 0) {
            ++out[p];
            n /= p;
        }
    }
    for (u64 p = 41; p < 1000 && p * p <= n; p += 2) {
        while (n % p == 0) {
            ++out[p];
            n /= p;
        }
    }
    factor_rec(n, out);
    return Factorization(out.begin(), out.end());
}

IntFactorization factor_int(const Int& n0)
{
    IntFactorization res;
    Int n = abs(n0);
    if (n == 0) throw Error(Errc::InvalidArgument, "cannot factor 0");
    if (n.fits_ulong_p()) {
        for (auto& [p, e] : factor_u64(n.get_ui())) res.factors.emplace_back(Int(static_cast<unsigned long>(p)), e);
        return res;
    }
    static const std::vector<u64> small = primes_up_to(1000000);
    for (u64 p : small) {
        if (n.fits_ulong_p()) break;
        unsigned e = 0;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
            ++e;
        }
        if (e) res.factors.emplace_back(Int(static_cast<unsigned long>(p)), e);
    }
    if (!n.fits_ulong_p()) {
        if (is_prime(n).prime) {
            res.factors.emplace_back(n, 1);
            return res;
        }
        throw Error(Errc::FactorizationBudget, "cofactor exceeds 2^64");
    }
    for (auto& [p, e] : factor_u64(n.get_ui())) {
        Int pz(static_cast<unsigned long>(p));
        auto it = std::find_if(res.factors.begin(), res.factors.end(), [&](auto& f) { return f.first == pz; });
        if (it != res.factors.end()) it->second += e;
        else res.factors.emplace_back(pz, e);
    }
    std::sort(res.factors.begin(), res.factors.end());
    return res;
}

}  // namespace normform
