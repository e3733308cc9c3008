#pragma once

#include "normform/field.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace normform {

struct PrimeLocalData {
    u64 p = 0;
    std::vector<int> degree_pattern;  // degrees of the distinct irreducible factors of f mod p, ascending
    int nu_p = 0;                     // number of degree-one factors
    Int nu;                           // #{a in (Z/p)^{n-k} : p | N(a)}
    Int nu2;                          // #{a in (Z/p)^n : p | N(a)}
    bool is_bad = false;              // p | disc(f)
};

PrimeLocalData local_data(u64 p, const FieldSpec& ctx);

// nu(p) from the splitting pattern; raises BadPrime when p | disc(f).
Int nu_fast(u64 p, const FieldSpec& ctx);

// Direct enumeration over (Z/p)^{n-k} and (Z/p)^n.
Int nu_brute(u64 p, const FieldSpec& ctx);
Int nu2_brute(u64 p, const FieldSpec& ctx);

// A prime ideal of Z[omega] above a good p, named by its factor of f mod p.
struct PrimeIdeal {
    u64 p = 0;
    int degree = 0;
    std::vector<u64> factor;  // monic irreducible factor of f mod p; for degree one this is X - root

    u64 root() const;  // degree one only
    Int norm() const;
    bool operator==(const PrimeIdeal& o) const { return p == o.p && factor == o.factor; }
    bool operator<(const PrimeIdeal& o) const;
};

struct IdealSym {
    std::vector<std::pair<PrimeIdeal, unsigned>> factors;
    Int norm = 1;

    bool squarefree() const;
    int mobius() const;  // 0 unless squarefree
    std::string str() const;
};

IdealSym make_ideal(std::vector<std::pair<PrimeIdeal, unsigned>> factors);

// Prime ideals above the good prime p, sorted.
std::vector<PrimeIdeal> primes_above(u64 p, const FieldSpec& ctx);

// rho(d) = N(d) #{a in (Z/p)^{n-k} : d | a} / p^{n-k}, multiplied over p.
Rational rho(const IdealSym& d, const FieldSpec& ctx);
// Direct count of {a in (Z/p)^{n-k} : P | a} for a single prime ideal.
Int rho_count_brute(const PrimeIdeal& P, const FieldSpec& ctx);

struct SeriesRow {
    u64 p = 0;
    std::vector<int> degree_pattern;
    int nu_p = 0;
    Int nu;
    long double factor = 0;
    long double running = 0;
};

struct SeriesEstimate {
    long double value = 0;
    long double log_value = 0;
    u64 cutoff = 0;
    // Rigorous bound on the contribution of second-order terms beyond the cutoff.
    long double tail_certified = 0;
    // Bound for the first-order terms sum_{p > P} (nu_p - 1)/p; heuristic, of square-root shape.
    long double tail_heuristic = 0;
    long double tail_bound = 0;  // total absolute bound on |value - limit|
    bool good_only = false;
    std::vector<u64> bad_primes;
    std::vector<u64> fixed_divisors;  // p with nu(p) = p^{n-k}
    std::vector<SeriesRow> rows;

    nlohmann::json summary() const;
    std::string csv() const;
};

struct SeriesOptions {
    bool keep_rows = false;
    bool good_only = false;  // skip primes dividing disc(f)
};

// prod_p (1 - nu(p)/p^{n-k}) (1 - 1/p)^{-1}
SeriesEstimate singular_series(const FieldSpec& ctx, u64 P_cut, const SeriesOptions& opt = {});
// prod_p (1 - nu(p)/p^{n-k}) (1 - nu2(p)/p^n)^{-1}
SeriesEstimate singular_series_tilde(const FieldSpec& ctx, u64 P_cut, const SeriesOptions& opt = {});

// Number of ideals of norm <= Y supported on good primes (all exponents).
Int ideal_count(u64 Y, const FieldSpec& ctx);
double gamma_estimate(u64 Y, const FieldSpec& ctx);

struct SieveWeight {
    IdealSym ideal;
    int mu = 1;
    double lambda = 0;
};

// Squarefree good-support ideals of norm < R with lambda = mu log(R/N).
std::vector<SieveWeight> sieve_weights(u64 R, const FieldSpec& ctx);

struct SieveSum {
    u64 R = 0;
    double value = 0;
    u64 ideals = 0;
    double target = 0;  // tilde-S over good primes divided by the ideal density
    double gap = 0;     // |value - target| / target
};

struct SieveSumOptions {
    bool rho_one = false;  // replace rho by 1
    u64 gamma_Y = 1000000;
    u64 series_cut = 10000;
};

SieveSum sieve_sum(u64 R, const FieldSpec& ctx, const SieveSumOptions& opt = {});

struct BuchstabResult {
    i64 lhs = 0;  // S(A, z2)
    i64 rhs = 0;  // S(A, z1) - sum_{z1 < p <= z2} S(A_p, p)
    i64 residual = 0;
};

// S(A, z) counts a in A with no prime factor <= z; S(A_p, p) counts a divisible by p with every prime factor >= p.
BuchstabResult buchstab_check(const std::vector<Int>& A, u64 z1, u64 z2);

}  // namespace normform
