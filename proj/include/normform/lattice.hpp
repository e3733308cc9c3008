#pragma once

#include "normform/field.hpp"
#include "normform/matrix.hpp"

#include <json.hpp>

#include <variant>

namespace normform {

struct IntLattice {
    size_t ambient_dim = 0;
    std::vector<IntVec> basis;  // rows, linearly independent
    size_t rank() const { return basis.size(); }
};

struct WedgeVec {
    size_t subset_size = 0;
    IntVec entries;  // maximal minors, column subsets in colex order

    Int content() const { return vec_content(entries); }
    Int norm2() const { return normform::norm2(entries); }
    bool is_zero() const { return normform::is_zero(entries); }
};

struct DegeneratePair {
    WedgeVec wedge;
};

WedgeVec maximal_minors(const IntMatrix& m);
WedgeVec wedge(const OrderElement& v, const FieldSpec& ctx);
WedgeVec wedge_pair(const OrderElement& v1, const OrderElement& v2, const FieldSpec& ctx);
IntMatrix stacked_constraints(const OrderElement& v1, const OrderElement& v2, const FieldSpec& ctx);

// (sum of squared entries) / content^2
Rational det_squared_formula(const WedgeVec& w);

// Saturated integer kernel of the constraint rows, built from a rational nullspace and p-saturation.
IntLattice lambda_v(const OrderElement& v, const FieldSpec& ctx);
std::variant<IntLattice, DegeneratePair> try_lambda_pair(const OrderElement& v1, const OrderElement& v2, const FieldSpec& ctx);
IntLattice lambda_pair(const OrderElement& v1, const OrderElement& v2, const FieldSpec& ctx);

// Saturated integer kernel by unimodular column reduction (A U = [H | 0]).
IntLattice kernel_oracle(const IntMatrix& constraints);

// Saturated kernel of an arbitrary integer matrix (rank-deficient rows allowed).
IntLattice saturated_kernel(const IntMatrix& m);

Int gram_det(const IntLattice& L);
bool contains(const IntLattice& L, const IntVec& x);
bool same_lattice(const IntLattice& a, const IntLattice& b);
IntLattice intersect(const IntLattice& a, const IntLattice& b);

// Exact LLL with delta = 99/100.
std::vector<IntVec> lll_reduce(std::vector<IntVec> basis);

struct ReducedBasis {
    std::vector<IntVec> basis;
    std::vector<Int> lengths2;    // ||z_i||^2
    std::vector<Int> minima2;     // Z_i^2 (exact when minima_exact)
    bool minima_exact = false;
    double max_length_ratio = 0;  // max ||z_i|| / Z_i
    double orthogonality = 0;     // c with ||sum l_i z_i|| >= c sum ||l_i z_i||
    double log2_defect = 0;       // log2(prod ||z_i|| / det)
};

ReducedBasis reduced_basis(const IntLattice& L, u64 enum_budget = 2000000);

// All nonzero lattice vectors with ||x||^2 <= radius2, one of each +/- pair, with coefficient vectors.
struct ShortVector {
    IntVec x;
    Int norm2;
};
std::vector<ShortVector> short_vectors(const std::vector<IntVec>& basis, const Int& radius2, u64 budget, bool& exhausted);

struct NiceBasis {
    std::vector<IntVec> basis;
    size_t target_index = 0;  // 0-based index t with wedge_pair(z_1, z_t) != 0
    IntVec lambda;            // coefficients of the replacement vector (empty when none was needed)
    Int first_minimum2;
};

NiceBasis nice_basis(const OrderElement& v, const FieldSpec& ctx);

// Vectors x with rev(x) spanning span{T^i(rev v) : i < k}; every such x has wedge_pair(x, v) = 0.
std::vector<IntVec> tight_subspace(const OrderElement& v, const FieldSpec& ctx);

nlohmann::json to_json(const IntLattice& L);

}  // namespace normform
