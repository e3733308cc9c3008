#include "normform/core.hpp"

#include <algorithm>

namespace normform {

const char* errc_name(Errc e)
{
    switch (e) {
    case Errc::NonMonic: return "NonMonic";
    case Errc::DegenerateDegree: return "DegenerateDegree";
    case Errc::ReducibleDetected: return "ReducibleDetected";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::DegeneratePair: return "DegeneratePair";
    case Errc::ZeroWedge: return "ZeroWedge";
    case Errc::DependentRows: return "DependentRows";
    case Errc::RankTooLarge: return "RankTooLarge";
    case Errc::SearchExhausted: return "SearchExhausted";
    case Errc::Unbounded: return "Unbounded";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::CompositeP: return "CompositeP";
    case Errc::BadPrime: return "BadPrime";
    case Errc::NotSquarefree: return "NotSquarefree";
    case Errc::FactorizationBudget: return "FactorizationBudget";
    case Errc::EmptySlice: return "EmptySlice";
    case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

IntVec to_int_vec(const std::vector<long>& v)
{
    IntVec r;
    r.reserve(v.size());
    for (long x : v) r.emplace_back(x);
    return r;
}

std::string to_string(const i128& x)
{
    if (x == 0) return "0";
    bool neg = x < 0;
    u128 u = neg ? static_cast<u128>(-(x + 1)) + 1 : static_cast<u128>(x);
    std::string s;
    while (u) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

Int to_int(i128 x)
{
    bool neg = x < 0;
    u128 u = neg ? static_cast<u128>(-(x + 1)) + 1 : static_cast<u128>(x);
    Int hi = static_cast<unsigned long>(static_cast<u64>(u >> 64));
    Int lo = static_cast<unsigned long>(static_cast<u64>(u));
    Int r = (hi << 64) + lo;
    return neg ? Int(-r) : r;
}

bool fits_i128(const Int& x) { return mpz_sizeinbase(x.get_mpz_t(), 2) <= 126; }

i128 to_i128(const Int& x)
{
    Int a = abs(x);
    Int lo = a & Int("18446744073709551615");
    Int hi = a >> 64;
    u128 u = (static_cast<u128>(hi.get_ui()) << 64) | static_cast<u128>(lo.get_ui());
    i128 r = static_cast<i128>(u);
    return x < 0 ? -r : r;
}

}  // namespace normform
