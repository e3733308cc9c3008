#pragma once

#include "normform/field.hpp"
#include "normform/geometry.hpp"
#include "normform/local.hpp"
#include "normform/quadrature.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace normform {

struct ExperimentConfig {
    FieldSpec field;
    AxisBox box;  // over the n-k free coordinates
    double X = 0;
    double eta1 = 0.1, eta2 = 0.1;
    double epsilon = 0.05;
    u64 P_cut = 10000;
    u64 seed = 1;
    unsigned threads = 1;
    u64 budget = 100000000;
    u64 samples = 1 << 16;
    unsigned slabs = 16;
    double c0 = 0.5;  // lower-bound constant checked when 22k/7 <= n < 4k

    nlohmann::json to_json() const;
};

// Box [1, X]^{n-k}.
ExperimentConfig make_experiment(const FieldSpec& field, double X);

struct MainTerm {
    double value = 0;
    double error = 0;
    QuadResult integral;
    SeriesEstimate sseries;
};

MainTerm predicted_main_term(const ExperimentConfig& cfg);

struct SlabCount {
    Int lo, hi;  // range of the first coordinate
    u64 points = 0;
    u64 positive_primes = 0;
    u64 abs_primes = 0;
    u64 negative_values = 0;
};

struct ObservedCount {
    u64 positive_primes = 0;  // N(a) prime
    u64 abs_primes = 0;       // |N(a)| prime
    u64 negative_values = 0;
    u64 points = 0;
    bool probabilistic = false;
    std::vector<SlabCount> slabs;
};

ObservedCount observed_prime_count(const ExperimentConfig& cfg);

struct TheoremReport {
    ObservedCount observed;
    MainTerm predicted;
    std::optional<double> ratio;
    std::string claim;  // "asymptotic", "lower_bound" or "none"
    std::optional<bool> lower_bound_holds;
    nlohmann::json config;

    nlohmann::json json() const;
    std::string csv() const;
};

TheoremReport theorem_check(const ExperimentConfig& cfg);

struct TypeITerm {
    u64 p = 0;
    u64 root = 0;
    u64 count = 0;      // #{x in box : sum x_i r^{i-1} = 0 mod p}
    double expected = 0;  // #box / p
    u64 lines = 0;      // per-term bound on |count - expected|
};

struct TypeIBlock {
    u64 D = 0;  // primes in [D, 2D)
    u64 ideals = 0;
    double discrepancy = 0;
    double reference = 0;  // X^{m-1} D^{1/m} + D
    double ratio = 0;
};

struct TypeIReport {
    std::vector<TypeIBlock> blocks;
    std::vector<TypeITerm> terms;
    double fitted_constant = 0;  // geometric mean of the block ratios
    double worst_over_fit = 0;   // max ratio / fitted constant
    u64 term_bound_violations = 0;
    nlohmann::json config;

    nlohmann::json json() const;
    std::string csv() const;
};

// Degree-one prime ideals over good p in [D_lo, 2 D_hi), grouped into dyadic blocks starting at D_lo.
TypeIReport typeI_discrepancy(const ExperimentConfig& cfg, u64 D_lo, u64 D_hi);

struct TypeIIReport {
    u64 observed = 0;      // ordered prime tuples with product in [X, X(1+eta)]
    double predicted = 0;  // integral of c_R(t) over the window
    std::optional<double> ratio;
    std::optional<u64> ideal_observed;  // same with prime ideals of the field, when within budget
    std::optional<double> ideal_ratio;

    nlohmann::json json() const;
};

TypeIIReport typeII_density_check(const PolytopeSpec& spec, double X, double eta, const FieldSpec* field = nullptr,
                                  u64 ideal_budget = 20000000);

struct IdealTau {
    Int tau;
    bool exact = true;
};

// Divisor count of the ideal generated by sum x_i omega^{i-1}; an upper bound when not exact.
IdealTau ideal_tau(const IntVec& x, const FieldSpec& ctx);

struct DivisorSumRow {
    u64 X = 0;
    Int points;
    bool sampled = false;
    double sum = 0;
    double stderr_ = 0;
    u64 inexact = 0;
    double norm_tau_sum = 0;  // the same sum with tau(|N|)
};

struct DivisorSumReport {
    int e = 1;
    std::vector<DivisorSumRow> rows;
    double fitted_log_exponent = 0;

    nlohmann::json json() const;
};

// Boxes [1, X]^{n-k}; boxes with more than `budget` points are sampled.
DivisorSumReport divisor_sum_check(const std::vector<u64>& Xs, int e, const FieldSpec& ctx, u64 budget = 100000, u64 samples = 20000,
                                   u64 seed = 1);

}  // namespace normform
