#pragma once

#include "normform/core.hpp"
#include "normform/matrix.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace normform {

struct FieldSpec {
    int n = 0;
    int k = 0;
    IntVec f;                      // c_0..c_{n-1}, 1
    std::optional<Int> pure_theta; // set when f = X^n - theta
    Int disc;                      // discriminant of f
    bool irreducibility_certified = false;

    int m() const { return n - k; }
};

using OrderElement = IntVec;
using IncompleteVec = IntVec;

FieldSpec make_context(const IntVec& f_coeffs, int k);
FieldSpec make_context(const std::vector<long>& f_coeffs, int k);

nlohmann::json to_json(const FieldSpec& ctx);
FieldSpec field_from_json(const nlohmann::json& j);

OrderElement diamond(const OrderElement& a, const OrderElement& b, const FieldSpec& ctx);
IntMatrix mul_matrix(const OrderElement& v, const FieldSpec& ctx);
Int norm(const OrderElement& v, const FieldSpec& ctx);
Int norm_form(const IncompleteVec& x, const FieldSpec& ctx);
OrderElement embed(const IncompleteVec& x, const FieldSpec& ctx);

// T(v)_j = v_{j+1} for j < n, T(v)_n = theta v_1 (pure fields only).
IntVec t_map(const IntVec& v, const Int& theta);
IntVec reversed(const IntVec& v);

// k x n matrix; row i is the functional x -> coordinate n-k+1+i of diamond(x, v).
IntMatrix constraint_rows(const OrderElement& v, const FieldSpec& ctx);

// Discriminant of a monic polynomial via the Sylvester resultant with f'.
Int discriminant(const IntVec& f);

// The incomplete norm form as an explicit homogeneous polynomial in n-k variables.
class NormPoly {
public:
    explicit NormPoly(const FieldSpec& ctx);

    int vars() const { return vars_; }
    int degree() const { return degree_; }
    size_t terms() const { return coeffs_.size(); }

    Int eval(const IntVec& x) const;
    // Exact when sum |c| prod |x_i|^e < 2^126; `ok` reports whether that bound held.
    i128 eval_i128(const i64* x, bool& ok) const;
    u64 eval_mod(const u64* x, u64 p) const;
    // Same, with coefficients already reduced by coeffs_mod(p).
    std::vector<u64> coeffs_mod(u64 p) const;
    u64 eval_mod(const u64* x, u64 p, const std::vector<u64>& cmod) const;
    long double eval_real(const long double* t) const;
    // Upper bound on |N(x)| for |x_i| <= bound_i.
    long double abs_bound(const std::vector<long double>& bound) const;

private:
    int vars_ = 0;
    int degree_ = 0;
    std::vector<std::vector<int>> exps_;
    std::vector<Int> coeffs_;
    std::vector<i128> coeffs128_;
    std::vector<long double> coeffs_real_;
};

}  // namespace normform
