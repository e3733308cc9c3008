#include "normform/local.hpp"

#include "normform/polymod.hpp"
#include "normform/primes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace normform {

namespace {

void require_prime(u64 p)
{
    if (!is_prime_u64(p)) throw Error(Errc::CompositeP, std::to_string(p) + " is not prime");
}

bool divides_disc(u64 p, const FieldSpec& ctx) { return mod_of(ctx.disc, p) == 0; }

std::vector<int> pattern_of(u64 p, const FieldSpec& ctx)
{
    auto counts = distinct_degree_counts(poly_reduce(ctx.f, p), p);
    std::vector<int> pat;
    for (size_t d = 1; d < counts.size(); ++d)
        for (int i = 0; i < counts[d]; ++i) pat.push_back(static_cast<int>(d));
    return pat;
}

// Coefficients of prod_i (1 - t^{d_i}).
std::vector<long> signed_subset_degrees(const std::vector<int>& pat)
{
    int total = 0;
    for (int d : pat) total += d;
    std::vector<long> c(total + 1, 0);
    c[0] = 1;
    int cur = 0;
    for (int d : pat) {
        for (int j = cur; j >= 0; --j) c[j + d] -= c[j];
        cur += d;
    }
    return c;
}

Int pow_int(u64 p, unsigned e)
{
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), p, e);
    return r;
}

// #{g : deg g < m, gcd(g, f mod p) != 1}; the pattern describes the radical of f mod p.
Int nu_from_pattern(u64 p, const std::vector<int>& pat, int m)
{
    auto c = signed_subset_degrees(pat);
    Int nu = 0;
    for (size_t j = 1; j < c.size(); ++j) {
        if (c[j] == 0) continue;
        nu -= Int(c[j]) * pow_int(p, static_cast<unsigned>(m - std::min<int>(static_cast<int>(j), m)));
    }
    return nu;
}

// 1 - nu/p^m and 1 - nu2/p^n as long doubles, computed without cancellation against 1.
struct LocalFractions {
    long double one_minus_x_m1 = 0;  // (1 - nu/p^m) - 1
    long double one_minus_y_m1 = 0;  // (1 - nu2/p^n) - 1
};

LocalFractions fractions(u64 p, const std::vector<int>& pat, int m)
{
    auto c = signed_subset_degrees(pat);
    LocalFractions f;
    const long double lp = static_cast<long double>(p);
    for (size_t j = 1; j < c.size(); ++j) {
        if (c[j] == 0) continue;
        f.one_minus_x_m1 += c[j] * std::pow(lp, -static_cast<long double>(std::min<int>(static_cast<int>(j), m)));
        f.one_minus_y_m1 += c[j] * std::pow(lp, -static_cast<long double>(j));
    }
    return f;
}

struct Neumaier {
    long double sum = 0, comp = 0;
    void add(long double x)
    {
        long double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    long double value() const { return sum + comp; }
};

std::string pattern_str(const std::vector<int>& pat)
{
    std::string s;
    for (size_t i = 0; i < pat.size(); ++i) s += (i ? ";" : "") + std::to_string(pat[i]);
    return s;
}

}  // namespace

PrimeLocalData local_data(u64 p, const FieldSpec& ctx)
{
    require_prime(p);
    PrimeLocalData d;
    d.p = p;
    d.degree_pattern = pattern_of(p, ctx);
    d.nu_p = static_cast<int>(std::count(d.degree_pattern.begin(), d.degree_pattern.end(), 1));
    d.nu = nu_from_pattern(p, d.degree_pattern, ctx.m());
    d.nu2 = nu_from_pattern(p, d.degree_pattern, ctx.n);
    d.is_bad = divides_disc(p, ctx);
    return d;
}

Int nu_fast(u64 p, const FieldSpec& ctx)
{
    require_prime(p);
    if (divides_disc(p, ctx)) throw Error(Errc::BadPrime, std::to_string(p) + " divides the discriminant");
    return nu_from_pattern(p, pattern_of(p, ctx), ctx.m());
}

namespace {

Int count_zero_norms(u64 p, const NormPoly& np)
{
    const int m = np.vars();
    long double total = std::pow(static_cast<long double>(p), m);
    if (total > 5e7L) throw Error(Errc::BudgetExceeded, "brute-force local count too large");
    std::vector<u64> a(m, 0);
    u64 count = 0;
    const u64 N = static_cast<u64>(total);
    const auto cmod = np.coeffs_mod(p);
    for (u64 i = 0; i < N; ++i) {
        if (np.eval_mod(a.data(), p, cmod) == 0) ++count;
        for (int j = 0; j < m; ++j) {
            if (++a[j] < p) break;
            a[j] = 0;
        }
    }
    return Int(static_cast<unsigned long>(count));
}

}  // namespace

Int nu_brute(u64 p, const FieldSpec& ctx)
{
    require_prime(p);
    return count_zero_norms(p, NormPoly(ctx));
}

Int nu2_brute(u64 p, const FieldSpec& ctx)
{
    require_prime(p);
    FieldSpec full = ctx;
    full.k = 0;
    return count_zero_norms(p, NormPoly(full));
}

u64 PrimeIdeal::root() const
{
    if (degree != 1) throw Error(Errc::InvalidArgument, "root of a prime ideal of degree > 1");
    return (p - factor[0]) % p;
}

Int PrimeIdeal::norm() const { return pow_int(p, static_cast<unsigned>(degree)); }

bool PrimeIdeal::operator<(const PrimeIdeal& o) const
{
    Int a = norm(), b = o.norm();
    if (a != b) return a < b;
    if (p != o.p) return p < o.p;
    return factor < o.factor;
}

bool IdealSym::squarefree() const
{
    for (size_t i = 0; i < factors.size(); ++i) {
        if (factors[i].second > 1) return false;
        for (size_t j = 0; j < i; ++j)
            if (factors[i].first == factors[j].first) return false;
    }
    return true;
}

int IdealSym::mobius() const
{
    if (!squarefree()) return 0;
    return factors.size() % 2 ? -1 : 1;
}

std::string IdealSym::str() const
{
    if (factors.empty()) return "(1)";
    std::ostringstream os;
    for (size_t i = 0; i < factors.size(); ++i) {
        const auto& [P, e] = factors[i];
        if (i) os << '*';
        os << "P(" << P.p << ',';
        if (P.degree == 1)
            os << "r=" << P.root();
        else
            os << "d=" << P.degree << ",[" << pattern_str(std::vector<int>(P.factor.begin(), P.factor.end())) << ']';
        os << ')';
        if (e > 1) os << '^' << e;
    }
    return os.str();
}

IdealSym make_ideal(std::vector<std::pair<PrimeIdeal, unsigned>> factors)
{
    IdealSym d;
    d.factors = std::move(factors);
    for (const auto& [P, e] : d.factors)
        for (unsigned i = 0; i < e; ++i) d.norm *= P.norm();
    return d;
}

std::vector<PrimeIdeal> primes_above(u64 p, const FieldSpec& ctx)
{
    require_prime(p);
    if (divides_disc(p, ctx)) throw Error(Errc::BadPrime, std::to_string(p) + " divides the discriminant");
    std::vector<PrimeIdeal> out;
    for (const auto& fac : factor_modp(poly_reduce(ctx.f, p), p)) out.push_back({p, fac.degree(), fac.g});
    std::sort(out.begin(), out.end());
    return out;
}

Rational rho(const IdealSym& d, const FieldSpec& ctx)
{
    if (!d.squarefree()) throw Error(Errc::NotSquarefree, d.str());
    std::map<u64, int> deg;
    for (const auto& [P, e] : d.factors) {
        if (divides_disc(P.p, ctx)) throw Error(Errc::BadPrime, std::to_string(P.p) + " divides the discriminant");
        deg[P.p] += P.degree;
    }
    Rational r = 1;
    for (const auto& [p, D] : deg) r *= pow_int(p, static_cast<unsigned>(D - std::min(D, ctx.m())));
    return r;
}

Int rho_count_brute(const PrimeIdeal& P, const FieldSpec& ctx)
{
    const int m = ctx.m();
    const u64 p = P.p;
    long double total = std::pow(static_cast<long double>(p), m);
    if (total > 5e7L) throw Error(Errc::BudgetExceeded, "brute-force count too large");
    PolyP a(m, 0);
    u64 count = 0;
    const u64 N = static_cast<u64>(total);
    for (u64 i = 0; i < N; ++i) {
        PolyP g = a;
        poly_trim(g);
        if (poly_rem(g, P.factor, p).empty()) ++count;
        for (int j = 0; j < m; ++j) {
            if (++a[j] < p) break;
            a[j] = 0;
        }
    }
    return Int(static_cast<unsigned long>(count));
}

nlohmann::json SeriesEstimate::summary() const
{
    auto num = [](long double x) -> nlohmann::json {
        if (!std::isfinite(static_cast<double>(x))) return nullptr;
        return static_cast<double>(x);
    };
    return {{"value", num(value)},
            {"log_value", num(log_value)},
            {"cutoff", cutoff},
            {"tail_bound", num(tail_bound)},
            {"tail_certified", num(tail_certified)},
            {"tail_heuristic", num(tail_heuristic)},
            {"good_only", good_only},
            {"bad_primes", bad_primes},
            {"fixed_divisors", fixed_divisors}};
}

std::string SeriesEstimate::csv() const
{
    std::ostringstream os;
    os.precision(17);
    os << "p,degree_pattern,nu_p,nu,factor,running_product\n";
    for (const auto& r : rows)
        os << r.p << ',' << pattern_str(r.degree_pattern) << ',' << r.nu_p << ',' << r.nu.get_str() << ',' << static_cast<double>(r.factor)
           << ',' << static_cast<double>(r.running) << '\n';
    return os.str();
}

namespace {

SeriesEstimate series(const FieldSpec& ctx, u64 P_cut, const SeriesOptions& opt, bool tilde)
{
    if (P_cut < 100) throw Error(Errc::InvalidArgument, "series cutoff must be at least 100");
    const int n = ctx.n, m = ctx.m();
    SeriesEstimate est;
    est.cutoff = P_cut;
    est.good_only = opt.good_only;

    std::vector<u64> primes = primes_up_to(P_cut);
    for (const auto& [q, e] : factor_int(abs(ctx.disc)).factors) {
        (void)e;
        if (q.fits_ulong_p()) {
            u64 qq = q.get_ui();
            est.bad_primes.push_back(qq);
            if (qq > P_cut) primes.push_back(qq);
        }
    }
    std::sort(est.bad_primes.begin(), est.bad_primes.end());

    Neumaier acc;
    bool zero = false;
    for (u64 p : primes) {
        bool bad = divides_disc(p, ctx);
        if (bad && opt.good_only) continue;
        auto pat = pattern_of(p, ctx);
        auto fr = fractions(p, pat, m);
        long double lf;
        if (fr.one_minus_x_m1 <= -1) {
            est.fixed_divisors.push_back(p);
            zero = true;
            lf = -INFINITY;
        } else {
            lf = std::log1p(fr.one_minus_x_m1);
            lf -= tilde ? std::log1p(fr.one_minus_y_m1) : std::log1p(-1.0L / static_cast<long double>(p));
            acc.add(lf);
        }
        if (opt.keep_rows) {
            SeriesRow r;
            r.p = p;
            r.degree_pattern = pat;
            r.nu_p = static_cast<int>(std::count(pat.begin(), pat.end(), 1));
            r.nu = nu_from_pattern(p, pat, m);
            r.factor = std::exp(lf);
            r.running = zero ? 0 : std::exp(acc.value());
            est.rows.push_back(std::move(r));
        }
    }
    est.log_value = zero ? -INFINITY : acc.value();
    est.value = zero ? 0 : std::exp(est.log_value);

    // |log(1 - x) - log(1 - y)| <= 2c/p^2 for p > P when m >= 2 and c/P^2 <= 1/2.
    const long double P = static_cast<long double>(P_cut);
    const long double c = std::pow(2.0L, n) / (1 - n / P);
    long double second = INFINITY;
    if (m >= 2 && n < P && c / (P * P) <= 0.5L) second = 2 * c / P;
    if (tilde) {
        est.tail_certified = second;
        est.tail_heuristic = 0;
    } else {
        // log F = (1 - nu_p)/p + E with |E| <= (2c + 3n + 1)/p^2.
        est.tail_certified = std::isfinite(static_cast<double>(second)) ? second + (3 * n + 1) / P : second;
        est.tail_heuristic = n * std::log(P) / std::sqrt(P);
    }
    long double t = est.tail_certified + est.tail_heuristic;
    est.tail_bound = zero ? 0 : est.value * std::expm1(t);
    if (!zero) {
        est.tail_certified = est.value * std::expm1(est.tail_certified);
        est.tail_heuristic = est.value * std::expm1(est.tail_heuristic);
    }
    return est;
}

}  // namespace

SeriesEstimate singular_series(const FieldSpec& ctx, u64 P_cut, const SeriesOptions& opt) { return series(ctx, P_cut, opt, false); }

SeriesEstimate singular_series_tilde(const FieldSpec& ctx, u64 P_cut, const SeriesOptions& opt) { return series(ctx, P_cut, opt, true); }

Int ideal_count(u64 Y, const FieldSpec& ctx)
{
    if (Y > 10000000) throw Error(Errc::BudgetExceeded, "ideal count above 10^7");
    if (Y == 0) return 0;
    auto spf = smallest_prime_factors(static_cast<std::uint32_t>(Y));
    std::vector<std::uint32_t> a(Y + 1, 0);
    a[1] = 1;
    std::map<u64, std::vector<std::uint32_t>> small;  // p -> a(p^e) for p^2 <= Y
    Int total = 1;
    for (u64 N = 2; N <= Y; ++N) {
        u64 p = spf[N];
        if (p == N) {
            if (divides_disc(p, ctx)) {
                a[N] = 0;
                if (p * p <= Y) small[p] = std::vector<std::uint32_t>(64, 0);
            } else if (p * p <= Y) {
                auto pat = pattern_of(p, ctx);
                // a(p^e) = #{(e_i) : sum d_i e_i = e}
                std::vector<std::uint32_t> ways(64, 0);
                ways[0] = 1;
                for (int d : pat)
                    for (size_t e = d; e < ways.size(); ++e) ways[e] += ways[e - d];
                small[p] = ways;
                a[N] = ways[1];
            } else {
                a[N] = static_cast<std::uint32_t>(count_roots_modp(poly_reduce(ctx.f, p), p));
            }
        } else {
            u64 M = N;
            unsigned e = 0;
            while (M % p == 0) {
                M /= p;
                ++e;
            }
            std::uint32_t ap = e == 1 ? a[p] : small.at(p)[e];
            a[N] = a[M] * ap;
        }
        total += a[N];
    }
    return total;
}

double gamma_estimate(u64 Y, const FieldSpec& ctx) { return ideal_count(Y, ctx).get_d() / static_cast<double>(Y); }

namespace {

std::vector<PrimeIdeal> prime_ideals_below(u64 R, const FieldSpec& ctx)
{
    std::vector<PrimeIdeal> out;
    for (u64 p : primes_up_to(R > 0 ? R - 1 : 0)) {
        if (divides_disc(p, ctx)) continue;
        if (p * p < R) {
            for (auto& P : primes_above(p, ctx))
                if (P.norm() < R) out.push_back(P);
        } else {
            for (u64 r : roots_modp(poly_reduce(ctx.f, p), p)) out.push_back({p, 1, {(p - r) % p, 1}});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Visits squarefree products of distinct prime ideals with norm < R.
void enumerate_squarefree(u64 R, const std::vector<PrimeIdeal>& P, const std::function<void(const std::vector<size_t>&, u64)>& visit)
{
    std::vector<size_t> cur;
    u64 budget = 50000000, nodes = 0;
    std::function<void(size_t, u64)> rec = [&](size_t start, u64 N) {
        if (++nodes > budget) throw Error(Errc::BudgetExceeded, "squarefree ideal enumeration");
        visit(cur, N);
        for (size_t i = start; i < P.size(); ++i) {
            u64 q = P[i].norm().get_ui();
            if (N * q >= R) break;
            cur.push_back(i);
            rec(i + 1, N * q);
            cur.pop_back();
        }
    };
    rec(0, 1);
}

}  // namespace

std::vector<SieveWeight> sieve_weights(u64 R, const FieldSpec& ctx)
{
    if (R > 10000000) throw Error(Errc::BudgetExceeded, "sieve level above 10^7");
    auto P = prime_ideals_below(R, ctx);
    std::vector<SieveWeight> out;
    enumerate_squarefree(R, P, [&](const std::vector<size_t>& idx, u64 N) {
        std::vector<std::pair<PrimeIdeal, unsigned>> f;
        for (size_t i : idx) f.push_back({P[i], 1});
        SieveWeight w;
        w.ideal = make_ideal(std::move(f));
        w.mu = idx.size() % 2 ? -1 : 1;
        w.lambda = w.mu * std::log(static_cast<double>(R) / static_cast<double>(N));
        out.push_back(std::move(w));
    });
    return out;
}

SieveSum sieve_sum(u64 R, const FieldSpec& ctx, const SieveSumOptions& opt)
{
    if (R > 10000000) throw Error(Errc::BudgetExceeded, "sieve level above 10^7");
    auto P = prime_ideals_below(R, ctx);
    const int m = ctx.m();
    SieveSum s;
    s.R = R;
    Neumaier acc;
    enumerate_squarefree(R, P, [&](const std::vector<size_t>& idx, u64 N) {
        long double w;
        if (opt.rho_one) {
            w = 1.0L / static_cast<long double>(N);
        } else {
            // rho(d)/N(d) = prod_p p^{-min(D_p, m)}
            std::map<u64, int> D;
            for (size_t i : idx) D[P[i].p] += P[i].degree;
            w = 1;
            for (const auto& [p, d] : D) w *= std::pow(static_cast<long double>(p), -static_cast<long double>(std::min(d, m)));
        }
        long double mu = idx.size() % 2 ? -1 : 1;
        acc.add(mu * w * std::log(static_cast<long double>(R) / static_cast<long double>(N)));
        ++s.ideals;
    });
    s.value = static_cast<double>(acc.value());
    SeriesOptions so;
    so.good_only = true;
    double series_value = opt.rho_one ? 1.0 : static_cast<double>(singular_series_tilde(ctx, opt.series_cut, so).value);
    s.target = series_value / gamma_estimate(opt.gamma_Y, ctx);
    s.gap = std::fabs(s.value - s.target) / s.target;
    return s;
}

BuchstabResult buchstab_check(const std::vector<Int>& A, u64 z1, u64 z2)
{
    if (z1 > z2) throw Error(Errc::InvalidArgument, "need z1 <= z2");
    struct Item {
        Int a;
        u64 spf;  // smallest prime factor, UINT64_MAX for units
        bool big_spf = false;
    };
    std::vector<Item> items;
    for (const auto& a : A) {
        Item it{a, UINT64_MAX};
        Int x = abs(a);
        if (x == 0) {
            it.spf = 2;
        } else if (x > 1) {
            auto f = factor_int(x).factors;
            Int s = f.front().first;
            for (const auto& pe : f) s = std::min(s, pe.first);
            if (s.fits_ulong_p())
                it.spf = s.get_ui();
            else
                it.big_spf = true;
        }
        items.push_back(it);
    }
    auto S = [&](u64 z) {
        i64 c = 0;
        for (const auto& it : items) c += it.big_spf || it.spf > z;
        return c;
    };
    BuchstabResult r;
    r.lhs = S(z2);
    r.rhs = S(z1);
    for (u64 p : primes_up_to(z2)) {
        if (p <= z1) continue;
        for (const auto& it : items) {
            bool divisible = it.a == 0 || mpz_divisible_ui_p(it.a.get_mpz_t(), p);
            if (divisible && (it.big_spf || it.spf >= p)) --r.rhs;
        }
    }
    r.residual = r.lhs - r.rhs;
    return r;
}

}  // namespace normform
