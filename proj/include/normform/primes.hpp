#pragma once

#include "normform/core.hpp"

#include <utility>
#include <vector>

namespace normform {

std::vector<u64> primes_up_to(u64 limit);

// Smallest prime factor table for 0..limit (spf[0]=spf[1]=0).
std::vector<std::uint32_t> smallest_prime_factors(std::uint32_t limit);

bool is_prime_u64(u64 n);

struct PrimalityResult {
    bool prime = false;
    bool probabilistic = false;
};

// Deterministic below 3.3e24 (bases 2..41); 64 seeded random rounds above.
PrimalityResult is_prime(const Int& n);

using Factorization = std::vector<std::pair<u64, unsigned>>;

// Complete factorization of n >= 1 (trial division then Pollard-Brent rho).
Factorization factor_u64(u64 n);

struct IntFactorization {
    std::vector<std::pair<Int, unsigned>> factors;
};

// Trial division to 10^6, then rho on a cofactor below 2^64; larger cofactors raise FactorizationBudget.
IntFactorization factor_int(const Int& n);

}  // namespace normform
