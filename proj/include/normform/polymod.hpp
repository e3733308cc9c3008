#pragma once

#include "normform/core.hpp"

#include <vector>

namespace normform {

// Dense polynomial over F_p, constant term first, no trailing zeros (zero polynomial is empty).
using PolyP = std::vector<u64>;

PolyP poly_reduce(const IntVec& f, u64 p);
void poly_trim(PolyP& a);
inline int poly_deg(const PolyP& a) { return static_cast<int>(a.size()) - 1; }
PolyP poly_mul(const PolyP& a, const PolyP& b, u64 p);
PolyP poly_sub(const PolyP& a, const PolyP& b, u64 p);
PolyP poly_rem(PolyP a, const PolyP& m, u64 p);
PolyP poly_div(PolyP a, const PolyP& m, u64 p);
PolyP poly_gcd(PolyP a, PolyP b, u64 p);
PolyP poly_monic(PolyP a, u64 p);
PolyP poly_powmod(PolyP base, const Int& e, const PolyP& m, u64 p);
PolyP poly_derivative(const PolyP& a, u64 p);
u64 poly_eval(const PolyP& a, u64 x, u64 p);

struct ModpFactor {
    PolyP g;          // monic irreducible
    unsigned mult;    // multiplicity in f mod p
    int degree() const { return poly_deg(g); }
};

// Distinct irreducible factors of degree d, counted for d = 1..deg f (index 0 unused).
std::vector<int> distinct_degree_counts(const PolyP& f, u64 p);

// Distinct monic irreducible factors of f mod p with multiplicities, sorted by (degree, coefficients).
std::vector<ModpFactor> factor_modp(const PolyP& f, u64 p);

// Number of distinct roots of f in F_p.
int count_roots_modp(const PolyP& f, u64 p);

// Sorted roots of f in F_p.
std::vector<u64> roots_modp(const PolyP& f, u64 p);

}  // namespace normform
