#include "normform/experiments.hpp"

#include "normform/polymod.hpp"
#include "normform/primes.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

namespace normform {

namespace {

nlohmann::json opt_num(const std::optional<double>& x)
{
    if (!x || !std::isfinite(*x)) return nullptr;
    return *x;
}

nlohmann::json box_json(const AxisBox& b)
{
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [lo, hi] : b.iv) j.push_back({lo.get_str(), hi.get_str()});
    return j;
}

struct IntRange {
    Int lo, hi;
    bool empty() const { return hi < lo; }
    Int size() const { return empty() ? Int(0) : Int(hi - lo + 1); }
};

std::vector<IntRange> integer_ranges(const AxisBox& box)
{
    std::vector<IntRange> r;
    for (const auto& [lo, hi] : box.iv) {
        IntRange x;
        mpz_cdiv_q(x.lo.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
        mpz_fdiv_q(x.hi.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
        r.push_back(x);
    }
    return r;
}

template <class F>
void parallel_for(u64 count, unsigned threads, F&& f)
{
    threads = std::max(1u, threads);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (u64 i = t; i < count; i += threads) f(i);
        });
    for (u64 i = 0; i < count; i += threads) f(i);
    for (auto& t : pool) t.join();
}

}  // namespace

nlohmann::json ExperimentConfig::to_json() const
{
    return {{"field", normform::to_json(field)},
            {"box", box_json(box)},
            {"X", X},
            {"eta1", eta1},
            {"eta2", eta2},
            {"epsilon", epsilon},
            {"P_cut", P_cut},
            {"seed", seed},
            {"threads", threads},
            {"budget", budget},
            {"samples", samples},
            {"slabs", slabs},
            {"c0", c0}};
}

ExperimentConfig make_experiment(const FieldSpec& field, double X)
{
    if (X < 2) throw Error(Errc::InvalidArgument, "X must be at least 2");
    ExperimentConfig c;
    c.field = field;
    c.X = X;
    Rational hi(X);
    c.box = AxisBox::cube(static_cast<size_t>(field.m()), 1, hi);
    return c;
}

MainTerm predicted_main_term(const ExperimentConfig& cfg)
{
    MainTerm mt;
    mt.sseries = singular_series(cfg.field, cfg.P_cut);
    NormPoly np(cfg.field);
    QuadOptions qo;
    qo.seed = cfg.seed;
    qo.samples = cfg.samples;
    qo.threads = cfg.threads;
    mt.integral = integrate_inverse_log([&](const long double* t) { return np.eval_real(t); }, cfg.box, qo);
    double S = static_cast<double>(mt.sseries.value);
    mt.value = S * mt.integral.value;
    mt.error = S * mt.integral.error + static_cast<double>(mt.sseries.tail_bound) * std::fabs(mt.integral.value);
    return mt;
}

ObservedCount observed_prime_count(const ExperimentConfig& cfg)
{
    const int m = cfg.field.m();
    auto ranges = integer_ranges(cfg.box);
    ObservedCount oc;
    Int total = 1;
    for (const auto& r : ranges) total *= r.size();
    if (total == 0) return oc;
    if (total > Int(static_cast<unsigned long>(cfg.budget))) throw Error(Errc::BudgetExceeded, "box has more points than the budget");
    for (const auto& r : ranges)
        if (!r.lo.fits_slong_p() || !r.hi.fits_slong_p()) throw Error(Errc::BudgetExceeded, "box coordinates exceed 64 bits");

    NormPoly np(cfg.field);
    const i64 lo0 = ranges[0].lo.get_si(), hi0 = ranges[0].hi.get_si();
    const u64 width = static_cast<u64>(hi0 - lo0 + 1);
    const u64 nslabs = std::min<u64>(std::max(1u, cfg.slabs), width);
    oc.slabs.resize(nslabs);
    std::atomic<bool> prob{false};
    parallel_for(nslabs, cfg.threads, [&](u64 s) {
        SlabCount& sc = oc.slabs[s];
        i64 a = lo0 + static_cast<i64>(width * s / nslabs);
        i64 b = lo0 + static_cast<i64>(width * (s + 1) / nslabs) - 1;
        sc.lo = static_cast<long>(a);
        sc.hi = static_cast<long>(b);
        std::vector<i64> x(m);
        for (int j = 1; j < m; ++j) x[j] = ranges[j].lo.get_si();
        x[0] = a;
        if (b < a) return;
        while (true) {
            bool ok = false;
            i128 v = np.eval_i128(x.data(), ok);
            Int V;
            bool small = ok;
            if (!ok) {
                IntVec xi(m);
                for (int j = 0; j < m; ++j) xi[j] = static_cast<long>(x[j]);
                V = np.eval(xi);
                small = fits_i128(V);
                if (small) v = to_i128(V);
            }
            ++sc.points;
            bool neg = small ? v < 0 : V < 0;
            sc.negative_values += neg;
            bool prime;
            if (small) {
                u128 av = v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v);
                if (av >> 64)
                    prime = [&] {
                        auto r = is_prime(to_int(static_cast<i128>(av)));
                        if (r.probabilistic) prob = true;
                        return r.prime;
                    }();
                else
                    prime = is_prime_u64(static_cast<u64>(av));
            } else {
                auto r = is_prime(abs(V));
                if (r.probabilistic) prob = true;
                prime = r.prime;
            }
            if (prime) {
                ++sc.abs_primes;
                if (!neg) ++sc.positive_primes;
            }
            // odometer: first coordinate within the slab, the rest over the box
            int j = 0;
            while (j < m) {
                i64 top = j == 0 ? b : ranges[j].hi.get_si();
                i64 bottom = j == 0 ? a : ranges[j].lo.get_si();
                if (x[j] < top) {
                    ++x[j];
                    break;
                }
                x[j] = bottom;
                ++j;
            }
            if (j == m) break;
        }
    });
    for (const auto& s : oc.slabs) {
        oc.points += s.points;
        oc.positive_primes += s.positive_primes;
        oc.abs_primes += s.abs_primes;
        oc.negative_values += s.negative_values;
    }
    oc.probabilistic = prob;
    return oc;
}

nlohmann::json TheoremReport::json() const
{
    nlohmann::json j;
    j["observed"] = observed.positive_primes;
    j["observed_abs"] = observed.abs_primes;
    j["negative_values"] = observed.negative_values;
    j["points"] = observed.points;
    j["probabilistic_primality"] = observed.probabilistic;
    j["predicted"] = predicted.value;
    j["pred_err"] = predicted.error;
    j["ratio"] = opt_num(ratio);
    j["claim"] = claim;
    j["lower_bound_holds"] = lower_bound_holds ? nlohmann::json(*lower_bound_holds) : nlohmann::json(nullptr);
    j["integral"] = {{"value", predicted.integral.value}, {"error", predicted.integral.error}, {"method", predicted.integral.method}};
    j["sseries"] = predicted.sseries.summary();
    j["config"] = config;
    j["runtime_s"] = nullptr;
    j["version"] = kVersion;
    return j;
}

std::string TheoremReport::csv() const
{
    std::ostringstream os;
    os << "slab,x1_lo,x1_hi,points,positive_primes,abs_primes,negative_values\n";
    for (size_t i = 0; i < observed.slabs.size(); ++i) {
        const auto& s = observed.slabs[i];
        os << i << ',' << s.lo.get_str() << ',' << s.hi.get_str() << ',' << s.points << ',' << s.positive_primes << ',' << s.abs_primes
           << ',' << s.negative_values << '\n';
    }
    return os.str();
}

TheoremReport theorem_check(const ExperimentConfig& cfg)
{
    TheoremReport r;
    r.config = cfg.to_json();
    r.observed = observed_prime_count(cfg);
    r.predicted = predicted_main_term(cfg);
    if (r.predicted.value > 0) r.ratio = static_cast<double>(r.observed.positive_primes) / r.predicted.value;
    const int n = cfg.field.n, k = cfg.field.k;
    if (k == 0 || n >= 4 * k) {
        r.claim = "asymptotic";
    } else if (7 * n >= 22 * k) {
        r.claim = "lower_bound";
        if (r.ratio) r.lower_bound_holds = *r.ratio >= cfg.c0;
    } else {
        r.claim = "none";
    }
    return r;
}

nlohmann::json TypeIReport::json() const
{
    nlohmann::json b = nlohmann::json::array();
    for (const auto& x : blocks)
        b.push_back({{"D", x.D}, {"ideals", x.ideals}, {"discrepancy", x.discrepancy}, {"reference", x.reference}, {"ratio", x.ratio}});
    return {{"blocks", b},
            {"fitted_constant", fitted_constant},
            {"worst_over_fit", worst_over_fit},
            {"terms", terms.size()},
            {"term_bound_violations", term_bound_violations},
            {"config", config},
            {"runtime_s", nullptr},
            {"version", kVersion}};
}

std::string TypeIReport::csv() const
{
    std::ostringstream os;
    os.precision(17);
    os << "p,root,count,expected,lines\n";
    for (const auto& t : terms) os << t.p << ',' << t.root << ',' << t.count << ',' << t.expected << ',' << t.lines << '\n';
    return os.str();
}

TypeIReport typeI_discrepancy(const ExperimentConfig& cfg, u64 D_lo, u64 D_hi)
{
    if (D_lo < 2 || D_hi < D_lo) throw Error(Errc::InvalidArgument, "need 2 <= D_lo <= D_hi");
    const FieldSpec& ctx = cfg.field;
    const int m = ctx.m();
    auto ranges = integer_ranges(cfg.box);
    Int total = 1;
    for (const auto& r : ranges) total *= r.size();
    Int lines = total == 0 ? Int(0) : Int(total / ranges[0].size());
    if (lines > Int(static_cast<unsigned long>(cfg.budget))) throw Error(Errc::BudgetExceeded, "too many lines in the box");
    const double points = total.get_d();

    TypeIReport rep;
    rep.config = cfg.to_json();
    rep.config["D_lo"] = D_lo;
    rep.config["D_hi"] = D_hi;
    for (u64 D = D_lo; D <= D_hi; D *= 2) {
        TypeIBlock blk;
        blk.D = D;
        for (u64 p : primes_up_to(2 * D - 1)) {
            if (p < D || mod_of(ctx.disc, p) == 0) continue;
            for (u64 r : roots_modp(poly_reduce(ctx.f, p), p)) {
                TypeITerm t;
                t.p = p;
                t.root = r;
                t.expected = points / static_cast<double>(p);
                t.lines = lines.get_ui();
                std::vector<u64> rp(m);
                rp[0] = 1 % p;
                for (int i = 1; i < m; ++i) rp[i] = rp[i - 1] * r % p;
                if (total != 0) {
                    // Walk the lines x_2..x_m; on each, count x_1 in range with x_1 = c mod p.
                    std::vector<Int> x(m);
                    for (int i = 1; i < m; ++i) x[i] = ranges[i].lo;
                    const Int& lo = ranges[0].lo;
                    const Int& hi = ranges[0].hi;
                    while (true) {
                        u64 s = 0;
                        for (int i = 1; i < m; ++i) s = (s + mod_of(x[i], p) * rp[i]) % p;
                        Int c = Int(static_cast<unsigned long>((p - s) % p));
                        Int P(static_cast<unsigned long>(p)), u, v;
                        Int hc = hi - c, lc = lo - 1 - c;
                        mpz_fdiv_q(u.get_mpz_t(), hc.get_mpz_t(), P.get_mpz_t());
                        mpz_fdiv_q(v.get_mpz_t(), lc.get_mpz_t(), P.get_mpz_t());
                        t.count += Int(u - v).get_ui();
                        int i = 1;
                        while (i < m) {
                            if (x[i] < ranges[i].hi) {
                                ++x[i];
                                break;
                            }
                            x[i] = ranges[i].lo;
                            ++i;
                        }
                        if (i >= m) break;
                    }
                }
                double dev = std::fabs(static_cast<double>(t.count) - t.expected);
                if (dev > static_cast<double>(t.lines) + 1e-9) ++rep.term_bound_violations;
                blk.discrepancy += dev;
                ++blk.ideals;
                rep.terms.push_back(t);
            }
        }
        blk.reference = std::pow(cfg.X, m - 1) * std::pow(static_cast<double>(D), 1.0 / m) + static_cast<double>(D);
        blk.ratio = blk.discrepancy / blk.reference;
        rep.blocks.push_back(blk);
        if (D > D_hi / 2) break;
    }
    double lg = 0;
    size_t cnt = 0;
    for (const auto& b : rep.blocks)
        if (b.ratio > 0) {
            lg += std::log(b.ratio);
            ++cnt;
        }
    rep.fitted_constant = cnt ? std::exp(lg / cnt) : 0;
    for (const auto& b : rep.blocks)
        if (rep.fitted_constant > 0) rep.worst_over_fit = std::max(rep.worst_over_fit, b.ratio / rep.fitted_constant);
    return rep;
}

nlohmann::json TypeIIReport::json() const
{
    nlohmann::json j{{"observed", observed}, {"predicted", predicted}, {"ratio", opt_num(ratio)}, {"surrogate", "rational primes"}};
    j["ideal_observed"] = ideal_observed ? nlohmann::json(*ideal_observed) : nlohmann::json(nullptr);
    j["ideal_ratio"] = opt_num(ideal_ratio);
    return j;
}

namespace {

// Ordered tuples (q_1..q_l) from a sorted multiset of prime norms with product in [A, B] and
// log q_i / log X in the polytope.
u64 count_tuples(const std::vector<u64>& norms, const PolytopeSpec& spec, double X, u64 A, u64 B)
{
    const size_t l = spec.l();
    const long double LX = std::log(static_cast<long double>(X));
    auto lower = [&](size_t i) { return static_cast<u64>(std::ceil(std::exp(spec.intervals[i].first * LX) - 1e-9L)); };
    auto upper = [&](size_t i) { return static_cast<u64>(std::floor(std::exp(spec.intervals[i].second * LX) + 1e-9L)); };
    auto inside = [&](size_t i, u64 q) {
        long double e = std::log(static_cast<long double>(q)) / LX;
        return e >= spec.intervals[i].first - 1e-15L && e <= spec.intervals[i].second + 1e-15L;
    };
    auto count_range = [&](u64 lo, u64 hi) -> u64 {
        if (hi < lo) return 0;
        return static_cast<u64>(std::upper_bound(norms.begin(), norms.end(), hi) - std::lower_bound(norms.begin(), norms.end(), lo));
    };
    std::function<u64(size_t, u64, long double)> rec = [&](size_t i, u64 prod, long double esum) -> u64 {
        if (spec.split && i == spec.split->index) {
            if (esum < spec.split->lo - 1e-15L || esum > spec.split->hi + 1e-15L) return 0;
        }
        if (i + 1 == l) {
            u64 lo = (A + prod - 1) / prod, hi = B / prod;
            lo = std::max(lo, lower(i));
            hi = std::min(hi, upper(i));
            if (hi < lo) return 0;
            u64 c = count_range(lo, hi);
            // endpoint corrections for the exponent window
            if (c && !inside(i, lo)) c -= count_range(lo, lo);
            if (c && hi != lo && !inside(i, hi)) c -= count_range(hi, hi);
            return c;
        }
        u64 total = 0;
        u64 lo = lower(i), hi = std::min<u64>(upper(i), B / prod);
        auto it = std::lower_bound(norms.begin(), norms.end(), lo);
        while (it != norms.end() && *it <= hi) {
            u64 q = *it;
            auto next = std::upper_bound(it, norms.end(), q);
            u64 mult = static_cast<u64>(next - it);
            if (inside(i, q)) total += mult * rec(i + 1, prod * q, esum + std::log(static_cast<long double>(q)) / LX);
            it = next;
        }
        return total;
    };
    return rec(0, 1, 0);
}

}  // namespace

TypeIIReport typeII_density_check(const PolytopeSpec& spec, double X, double eta, const FieldSpec* field, u64 ideal_budget)
{
    if (spec.l() == 0 || spec.l() > 3) throw Error(Errc::InvalidArgument, "type II check supports 1 to 3 factors");
    if (X < 2 || X > 1e8) throw Error(Errc::BudgetExceeded, "X must be in [2, 10^8]");
    if (!(eta > 0)) throw Error(Errc::InvalidArgument, "eta must be positive");
    const u64 A = static_cast<u64>(std::ceil(X)), B = static_cast<u64>(std::floor(X * (1 + eta)));
    TypeIIReport rep;
    rep.observed = count_tuples(primes_up_to(B), spec, X, A, B);

    // prediction: integral over [X, X(1+eta)] of I(log t / log X) / log X
    using G = boost::math::quadrature::gauss<double, 20>;
    const double LX = std::log(X);
    auto c = [&](double t) {
        auto pi = polytope_integral(spec, std::log(t) / LX, 1e-9);
        return pi.value / LX;
    };
    const int panels = 8;
    double h = (X * (1 + eta) - X) / panels;
    for (int p = 0; p < panels; ++p) {
        double a = X + p * h;
        rep.predicted += G::integrate(c, a, a + h);
    }
    if (rep.predicted > 0) rep.ratio = static_cast<double>(rep.observed) / rep.predicted;

    if (field && B <= ideal_budget) {
        std::vector<u64> norms;
        for (u64 p : primes_up_to(B)) {
            if (mod_of(field->disc, p) == 0) continue;
            PolyP f = poly_reduce(field->f, p);
            if (p * p <= B) {
                auto counts = distinct_degree_counts(f, p);
                Int q = 1;
                for (size_t d = 1; d < counts.size(); ++d) {
                    q *= static_cast<unsigned long>(p);
                    if (q > Int(static_cast<unsigned long>(B))) break;
                    for (int i = 0; i < counts[d]; ++i) norms.push_back(q.get_ui());
                }
            } else {
                int r = count_roots_modp(f, p);
                for (int i = 0; i < r; ++i) norms.push_back(p);
            }
        }
        std::sort(norms.begin(), norms.end());
        rep.ideal_observed = count_tuples(norms, spec, X, A, B);
        if (rep.predicted > 0) rep.ideal_ratio = static_cast<double>(*rep.ideal_observed) / rep.predicted;
    }
    return rep;
}

namespace {

Int valuation_cap(Int x, const Int& p, unsigned cap, unsigned& v)
{
    v = 0;
    while (v < cap && x != 0 && mpz_divisible_p(x.get_mpz_t(), p.get_mpz_t())) {
        x /= p;
        ++v;
    }
    if (x == 0) v = cap;
    return x;
}

Int balanced_tau_bound(unsigned a, int n)
{
    unsigned q = a / n, r = a % n;
    Int t = 1;
    for (unsigned i = 0; i < r; ++i) t *= q + 2;
    for (int i = static_cast<int>(r); i < n; ++i) t *= q + 1;
    return t;
}

}  // namespace

IdealTau ideal_tau(const IntVec& x, const FieldSpec& ctx)
{
    IdealTau out;
    out.tau = 1;
    Int N = norm_form(x, ctx);
    if (N == 0) throw Error(Errc::ZeroVector, "zero element has no divisor count");
    const IntVec a = embed(x, ctx);
    for (const auto& [P, e] : factor_int(abs(N)).factors) {
        if (!P.fits_ulong_p() || mod_of(ctx.disc, P.get_ui()) == 0) {
            out.tau *= balanced_tau_bound(e, ctx.n);
            out.exact = false;
            continue;
        }
        const u64 p = P.get_ui();
        Int pk;
        mpz_pow_ui(pk.get_mpz_t(), P.get_mpz_t(), e + 1);
        PolyP abar = poly_reduce(a, p);
        unsigned used = 0;
        std::vector<int> free_degrees;  // higher-degree primes dividing a mod p
        for (const auto& fac : factor_modp(poly_reduce(ctx.f, p), p)) {
            if (fac.degree() == 1) {
                // Lift the root to a p-adic root modulo p^{e+1}.
                Int r = Int(static_cast<unsigned long>((p - fac.g[0]) % p));
                Int mod = P;
                Int fp_deriv, fv;
                while (mod < pk) {
                    mod *= mod;
                    if (mod > pk) mod = pk;
                    fv = 0;
                    fp_deriv = 0;
                    for (size_t i = ctx.f.size(); i-- > 0;) {
                        fp_deriv = (fp_deriv * r + fv) % mod;
                        fv = (fv * r + ctx.f[i]) % mod;
                    }
                    Int inv;
                    mpz_invert(inv.get_mpz_t(), fp_deriv.get_mpz_t(), mod.get_mpz_t());
                    r = r - fv * inv;
                    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
                }
                Int val = 0;
                for (size_t i = a.size(); i-- > 0;) val = (val * r + a[i]) % pk;
                unsigned v;
                valuation_cap(val, P, e, v);
                used += v;
                out.tau *= v + 1;
            } else if (abar.empty() || poly_rem(abar, fac.g, p).empty()) {
                free_degrees.push_back(fac.degree());
            }
        }
        unsigned rest = e - std::min(e, used);
        // Distribute the remaining valuation over the dividing higher-degree primes.
        u64 solutions = 0;
        Int best = 0;
        std::function<void(size_t, unsigned, Int)> rec = [&](size_t i, unsigned left, Int prod) {
            if (i == free_degrees.size()) {
                if (left == 0) {
                    ++solutions;
                    best = std::max(best, prod);
                }
                return;
            }
            const unsigned d = static_cast<unsigned>(free_degrees[i]);
            for (unsigned ei = 1; ei * d <= left; ++ei) rec(i + 1, left - ei * d, prod * (ei + 1));
        };
        rec(0, rest, 1);
        if (solutions == 1) {
            out.tau *= best;
        } else {
            out.tau *= solutions ? best : balanced_tau_bound(rest, ctx.n);
            out.exact = false;
        }
    }
    return out;
}

nlohmann::json DivisorSumReport::json() const
{
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& r : rows)
        rs.push_back({{"X", r.X},
                      {"points", r.points.get_str()},
                      {"sampled", r.sampled},
                      {"sum", r.sum},
                      {"stderr", r.stderr_},
                      {"inexact", r.inexact},
                      {"norm_tau_sum", r.norm_tau_sum}});
    return {{"e", e}, {"rows", rs}, {"fitted_log_exponent", fitted_log_exponent}, {"version", kVersion}};
}

DivisorSumReport divisor_sum_check(const std::vector<u64>& Xs, int e, const FieldSpec& ctx, u64 budget, u64 samples, u64 seed)
{
    if (e < 0 || e > 2) throw Error(Errc::InvalidArgument, "exponent must be 0, 1 or 2");
    const int m = ctx.m();
    DivisorSumReport rep;
    rep.e = e;
    for (u64 X : Xs) {
        DivisorSumRow row;
        row.X = X;
        mpz_ui_pow_ui(row.points.get_mpz_t(), X, m);
        if (e == 0) {
            row.sum = row.points.get_d();
            row.norm_tau_sum = row.sum;
            rep.rows.push_back(row);
            continue;
        }
        auto term = [&](const IntVec& x, double& nt) {
            IdealTau t = ideal_tau(x, ctx);
            if (!t.exact) ++row.inexact;
            Int tn = 1;
            for (const auto& [q, a] : factor_int(abs(norm_form(x, ctx))).factors) tn *= a + 1;
            double w = t.tau.get_d(), wn = tn.get_d();
            nt = e == 2 ? wn * wn : wn;
            return e == 2 ? w * w : w;
        };
        if (row.points <= Int(static_cast<unsigned long>(budget))) {
            IntVec x(m, 1);
            while (true) {
                double nt;
                row.sum += term(x, nt);
                row.norm_tau_sum += nt;
                int j = 0;
                while (j < m && x[j] == static_cast<unsigned long>(X)) x[j++] = 1;
                if (j == m) break;
                x[j] += 1;
            }
        } else {
            row.sampled = true;
            double s = 0, s2 = 0, sn = 0;
            for (u64 i = 0; i < samples; ++i) {
                std::mt19937_64 rng(stream_seed(seed ^ X, i));
                std::uniform_int_distribution<u64> d(1, X);
                IntVec x(m);
                for (auto& c : x) c = static_cast<unsigned long>(d(rng));
                double nt;
                double v = term(x, nt);
                s += v;
                s2 += v * v;
                sn += nt;
            }
            double mean = s / samples, var = std::max(0.0, s2 / samples - mean * mean);
            row.sum = row.points.get_d() * mean;
            row.stderr_ = row.points.get_d() * std::sqrt(var / samples);
            row.norm_tau_sum = row.points.get_d() * sn / samples;
        }
        rep.rows.push_back(row);
    }
    // least-squares slope of log(S / X^m) against log log X
    if (rep.rows.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double k = static_cast<double>(rep.rows.size());
        for (const auto& r : rep.rows) {
            double u = std::log(std::log(static_cast<double>(r.X)));
            double y = std::log(r.sum / r.points.get_d());
            sx += u;
            sy += y;
            sxx += u * u;
            sxy += u * y;
        }
        double den = k * sxx - sx * sx;
        rep.fitted_log_exponent = den != 0 ? (k * sxy - sx * sy) / den : 0;
    }
    return rep;
}

}  // namespace normform
