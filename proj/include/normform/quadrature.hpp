#pragma once

#include "normform/core.hpp"
#include "normform/geometry.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace normform {

struct QuadResult {
    double value = 0;
    double error = 0;
    std::string method;
};

struct QuadOptions {
    u64 seed = 1;
    u64 samples = 1 << 16;   // Monte Carlo samples in total
    unsigned panels = 64;    // Gauss-Legendre panels per axis
    unsigned threads = 1;
};

using NormFn = std::function<long double(const long double*)>;

// Integral of 1/log N(t) over {t in box : N(t) >= 2}. Product Gauss-Legendre when dim <= 2,
// stratified Monte Carlo above; deterministic for a given seed, independent of the thread count.
QuadResult integrate_inverse_log(const NormFn& N, const AxisBox& box, const QuadOptions& opt = {});

struct PolytopeSpec {
    std::vector<std::pair<double, double>> intervals;  // e_i ranges
    // Optional constraint lo <= e_1 + ... + e_index <= hi on a leading group (index < l).
    struct Split {
        size_t index = 0;
        double lo = 0, hi = 0;
    };
    std::optional<Split> split;

    size_t l() const { return intervals.size(); }
};

struct PolytopeIntegral {
    double value = 0;
    double error = 0;
    bool empty = false;
};

// Integral of de_1..de_{l-1} / (e_1 .. e_l) over the slice e_1 + .. + e_l = target inside the polytope.
PolytopeIntegral polytope_integral(const PolytopeSpec& spec, double target, double tol = 1e-11);

}  // namespace normform
