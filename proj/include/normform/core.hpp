#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace normform {

using Int = mpz_class;
using Rational = mpq_class;
using IntVec = std::vector<Int>;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr const char* kVersion = "0.1.0";

enum class Errc {
    NonMonic,
    DegenerateDegree,
    ReducibleDetected,
    ZeroVector,
    DegeneratePair,
    ZeroWedge,
    DependentRows,
    RankTooLarge,
    SearchExhausted,
    Unbounded,
    BudgetExceeded,
    CompositeP,
    BadPrime,
    NotSquarefree,
    FactorizationBudget,
    EmptySlice,
    InvalidArgument,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

private:
    Errc code_;
};

inline bool is_budget(Errc e) { return e == Errc::BudgetExceeded || e == Errc::FactorizationBudget; }

// splitmix64 finalizer; used to derive independent streams from (seed, index).
inline u64 splitmix64(u64 x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline u64 stream_seed(u64 seed, u64 index) { return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)); }

inline bool is_zero(const IntVec& v)
{
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

inline Int vec_content(const IntVec& v)
{
    Int g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g;
}

inline Int dot(const IntVec& a, const IntVec& b)
{
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Int norm2(const IntVec& a) { return dot(a, a); }

IntVec to_int_vec(const std::vector<long>& v);

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m)
{
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

inline u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

inline u64 mod_of(const Int& x, u64 p)
{
    return mpz_fdiv_ui(x.get_mpz_t(), static_cast<unsigned long>(p));
}

std::string to_string(const i128& x);
Int to_int(i128 x);
bool fits_i128(const Int& x);
i128 to_i128(const Int& x);

}  // namespace normform
