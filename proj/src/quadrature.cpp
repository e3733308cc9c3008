#include "normform/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace normform {

namespace {

struct Rule {
    std::vector<long double> x, w;  // on [-1, 1]
};

const Rule& gl20()
{
    static const Rule r = [] {
        using G = boost::math::quadrature::gauss<double, 20>;
        Rule q;
        for (size_t i = 0; i < G::abscissa().size(); ++i) {
            long double a = G::abscissa()[i], w = G::weights()[i];
            q.x.push_back(a);
            q.w.push_back(w);
            if (a != 0) {
                q.x.push_back(-a);
                q.w.push_back(w);
            }
        }
        return q;
    }();
    return r;
}

long double inv_log(const NormFn& N, const long double* t)
{
    long double v = N(t);
    return v >= 2 ? 1.0L / std::log(v) : 0.0L;
}

long double product_gl(const NormFn& N, const std::vector<std::pair<long double, long double>>& box, unsigned panels)
{
    const Rule& r = gl20();
    const size_t m = box.size();
    // Nodes and weights along each axis.
    std::vector<std::vector<long double>> xs(m), ws(m);
    for (size_t d = 0; d < m; ++d) {
        // panel edges lo + L (i/panels)^2, fine near the lower corner where N is small
        const long double L = box[d].second - box[d].first;
        for (unsigned p = 0; p < panels; ++p) {
            long double u0 = static_cast<long double>(p) / panels, u1 = static_cast<long double>(p + 1) / panels;
            long double h = L * (u1 * u1 - u0 * u0);
            long double c = box[d].first + L * u0 * u0 + 0.5L * h;
            for (size_t i = 0; i < r.x.size(); ++i) {
                xs[d].push_back(c + 0.5L * h * r.x[i]);
                ws[d].push_back(0.5L * h * r.w[i]);
            }
        }
    }
    long double total = 0;
    long double t[2];
    if (m == 1) {
        for (size_t i = 0; i < xs[0].size(); ++i) {
            t[0] = xs[0][i];
            total += ws[0][i] * inv_log(N, t);
        }
    } else {
        for (size_t i = 0; i < xs[0].size(); ++i) {
            long double row = 0;
            t[0] = xs[0][i];
            for (size_t j = 0; j < xs[1].size(); ++j) {
                t[1] = xs[1][j];
                row += ws[1][j] * inv_log(N, t);
            }
            total += ws[0][i] * row;
        }
    }
    return total;
}

}  // namespace

QuadResult integrate_inverse_log(const NormFn& N, const AxisBox& box, const QuadOptions& opt)
{
    QuadResult out;
    const size_t m = box.dim();
    std::vector<std::pair<long double, long double>> b(m);
    for (size_t d = 0; d < m; ++d) {
        b[d] = {box.iv[d].first.get_d(), box.iv[d].second.get_d()};
        if (b[d].second <= b[d].first) {
            out.method = "empty";
            return out;
        }
    }
    if (m == 0) throw Error(Errc::InvalidArgument, "integration needs at least one variable");
    if (m <= 2) {
        out.method = "gauss-legendre";
        unsigned panels = std::max(2u, opt.panels);
        long double fine = product_gl(N, b, panels);
        long double coarse = product_gl(N, b, panels / 2);
        out.value = static_cast<double>(fine);
        out.error = static_cast<double>(std::fabs(fine - coarse));
        return out;
    }
    out.method = "stratified-monte-carlo";
    u64 per_axis = std::max<u64>(1, static_cast<u64>(std::floor(std::pow(static_cast<double>(opt.samples) / 8.0, 1.0 / m))));
    u64 strata = 1;
    for (size_t d = 0; d < m; ++d) strata *= per_axis;
    const u64 q = std::max<u64>(2, opt.samples / strata);
    long double sv = 1;
    for (size_t d = 0; d < m; ++d) sv *= (b[d].second - b[d].first) / per_axis;

    std::vector<long double> mean(strata), var(strata);
    auto work = [&](unsigned tid, unsigned nthreads) {
        std::vector<long double> t(m);
        for (u64 s = tid; s < strata; s += nthreads) {
            std::mt19937_64 rng(stream_seed(opt.seed, s));
            std::uniform_real_distribution<double> u(0, 1);
            std::vector<u64> cell(m);
            u64 rest = s;
            for (size_t d = 0; d < m; ++d) {
                cell[d] = rest % per_axis;
                rest /= per_axis;
            }
            long double sum = 0, sum2 = 0;
            for (u64 i = 0; i < q; ++i) {
                for (size_t d = 0; d < m; ++d) {
                    long double w = (b[d].second - b[d].first) / per_axis;
                    t[d] = b[d].first + w * (cell[d] + static_cast<long double>(u(rng)));
                }
                long double v = inv_log(N, t.data());
                sum += v;
                sum2 += v * v;
            }
            mean[s] = sum / q;
            var[s] = std::max(0.0L, (sum2 / q - mean[s] * mean[s]) * q / (q - 1));
        }
    };
    unsigned nthreads = std::max(1u, opt.threads);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(work, t, nthreads);
    work(0, nthreads);
    for (auto& t : pool) t.join();
    long double total = 0, v = 0;
    for (u64 s = 0; s < strata; ++s) {
        total += sv * mean[s];
        v += sv * sv * var[s] / q;
    }
    out.value = static_cast<double>(total);
    out.error = static_cast<double>(std::sqrt(v));
    return out;
}

namespace {

struct SliceIntegrator {
    const PolytopeSpec& spec;
    double target;
    double tol;
    std::vector<double> suffix_lo, suffix_hi;  // sums of a_i, b_i for i >= j
    std::vector<double> group_lo, group_hi;    // sums over i in [j, index)
    double G_lo = 0, G_hi = 0;                 // feasible range of the leading group sum
    double err = 0;

    SliceIntegrator(const PolytopeSpec& s, double t, double tl) : spec(s), target(t), tol(tl)
    {
        const size_t l = s.l();
        suffix_lo.assign(l + 1, 0);
        suffix_hi.assign(l + 1, 0);
        for (size_t j = l; j-- > 0;) {
            suffix_lo[j] = suffix_lo[j + 1] + s.intervals[j].first;
            suffix_hi[j] = suffix_hi[j + 1] + s.intervals[j].second;
        }
        if (s.split) {
            const size_t idx = s.split->index;
            group_lo.assign(idx + 1, 0);
            group_hi.assign(idx + 1, 0);
            for (size_t j = idx; j-- > 0;) {
                group_lo[j] = group_lo[j + 1] + s.intervals[j].first;
                group_hi[j] = group_hi[j + 1] + s.intervals[j].second;
            }
            G_lo = std::max(s.split->lo, target - suffix_hi[idx]);
            G_hi = std::min(s.split->hi, target - suffix_lo[idx]);
        }
    }

    std::pair<double, double> range(size_t j, double s) const
    {
        double lo = std::max(spec.intervals[j].first, target - s - suffix_hi[j + 1]);
        double hi = std::min(spec.intervals[j].second, target - s - suffix_lo[j + 1]);
        if (spec.split && j < spec.split->index) {
            lo = std::max(lo, G_lo - s - group_hi[j + 1]);
            hi = std::min(hi, G_hi - s - group_lo[j + 1]);
        }
        return {lo, hi};
    }

    double level(size_t j, double s)
    {
        const size_t l = spec.l();
        if (j == l - 1) {
            double e = target - s;
            return e > 0 ? 1.0 / e : 0.0;
        }
        auto [lo, hi] = range(j, s);
        if (!(hi > lo)) return 0;
        double e_out = 0;
        auto f = [&](double e) { return level(j + 1, s + e) / e; };
        double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, j == 0 ? 15 : 10, tol, &e_out);
        if (j == 0) err = e_out;
        return v;
    }
};

}  // namespace

PolytopeIntegral polytope_integral(const PolytopeSpec& spec, double target, double tol)
{
    const size_t l = spec.l();
    if (l == 0 || l > 6) throw Error(Errc::InvalidArgument, "polytope needs 1 to 6 coordinates");
    for (const auto& [a, b] : spec.intervals)
        if (!(a > 0) || b < a) throw Error(Errc::InvalidArgument, "intervals must lie in (0, inf) with lo <= hi");
    if (spec.split && (spec.split->index == 0 || spec.split->index >= l)) throw Error(Errc::InvalidArgument, "split index must be in [1, l)");
    PolytopeIntegral out;
    if (l == 1) {
        if (target >= spec.intervals[0].first && target <= spec.intervals[0].second)
            out.value = 1.0 / target;
        else
            out.empty = true;
        return out;
    }
    SliceIntegrator si(spec, target, tol);
    auto [lo, hi] = si.range(0, 0);
    if (!(hi > lo) || target < si.suffix_lo[0] || target > si.suffix_hi[0] || (spec.split && si.G_hi < si.G_lo)) {
        out.empty = true;
        return out;
    }
    out.value = si.level(0, 0);
    out.error = si.err;
    return out;
}

}  // namespace normform
