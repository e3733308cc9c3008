#pragma once

#include "normform/field.hpp"
#include "normform/lattice.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace normform {

struct AxisBox {
    std::vector<std::pair<Rational, Rational>> iv;

    static AxisBox cube(size_t dim, const Rational& lo, const Rational& hi);
    size_t dim() const { return iv.size(); }
    Rational volume() const;
};

struct LinearConstraint {
    IntVec f;
    Rational lo, hi;
};

struct LinearRegion {
    std::vector<LinearConstraint> constraints;
    std::optional<AxisBox> box;

    bool contains(const IntVec& x) const;
};

struct CountOptions {
    u64 budget = 100000000;
    std::vector<IntVec>* points = nullptr;
};

// Exact number of lattice points in the region, enumerated over a reduced basis.
u64 points_in_region(const IntLattice& L, const LinearRegion& R, const CountOptions& opt = {});

struct VolumeResult {
    double value = 0;
    double stderr_ = 0;
    bool exact = false;
    Rational exact_value;
};

// Exact for dimension <= 4 (vertex enumeration and a pulling triangulation), stratified Monte Carlo above.
VolumeResult region_volume(const LinearRegion& R, u64 seed = 1, u64 samples = 200000);

struct DavenportEstimate {
    double main_term = 0;
    double error_bound = 0;
    double volume = 0;
    double det = 0;
    bool volume_exact = false;
    double volume_stderr = 0;
    std::vector<double> minima;
};

DavenportEstimate davenport_estimate(const IntLattice& L, const LinearRegion& R, u64 seed = 1);

// Number of b in F_p^n whose constraint matrix mod p has rank < k.
u64 fp_wedge_census(u64 p, const FieldSpec& ctx, u64 budget = 100000000);

struct CensusRow {
    double param = 0;
    u64 count = 0;
    double reference = 0;
    double ratio = 0;
    double extra = 0;
};

struct CensusReport {
    std::string param_name;
    std::vector<CensusRow> rows;
    u64 samples = 0;
    u64 degenerate = 0;
    double max_ratio = 0;

    std::string csv() const;
    nlohmann::json summary() const;
};

// Fraction of sampled pairs with ||b_i|| in [B, 2B] whose wedge satisfies ||w||^2 <= kappa^2 B^{4k}.
// `extra` is the mean over samples of vol{A <= |a| <= 2A}/det(Lambda_{b1,b2}) taken over the counted non-degenerate pairs.
CensusReport skew_census(const FieldSpec& ctx, double A, long B, u64 samples, const std::vector<double>& kappas, u64 seed,
                         unsigned threads = 1);

}  // namespace normform
