#include "normform/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace normform {

AxisBox AxisBox::cube(size_t dim, const Rational& lo, const Rational& hi)
{
    AxisBox b;
    b.iv.assign(dim, {lo, hi});
    return b;
}

Rational AxisBox::volume() const
{
    Rational v = 1;
    for (const auto& [lo, hi] : iv) v *= hi - lo;
    return v;
}

bool LinearRegion::contains(const IntVec& x) const
{
    if (box)
        for (size_t t = 0; t < x.size(); ++t)
            if (x[t] < box->iv[t].first || x[t] > box->iv[t].second) return false;
    for (const auto& c : constraints) {
        Int s = dot(c.f, x);
        if (s < c.lo || s > c.hi) return false;
    }
    return true;
}

namespace {

Int ceil_q(const Rational& q)
{
    Int r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Int floor_q(const Rational& q)
{
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

// Intersect [lo, hi] with {c : a + c b in [L, H]}; returns false when empty.
bool clip(Rational& lo, Rational& hi, bool& has, const Rational& a, const Rational& b, const Rational& L, const Rational& H)
{
    if (b == 0) return a >= L && a <= H;
    Rational x = (L - a) / b, y = (H - a) / b;
    if (b < 0) std::swap(x, y);
    if (!has) {
        lo = x;
        hi = y;
        has = true;
    } else {
        if (x > lo) lo = x;
        if (y < hi) hi = y;
    }
    return lo <= hi;
}

}  // namespace

u64 points_in_region(const IntLattice& L, const LinearRegion& R, const CountOptions& opt)
{
    if (!R.box) throw Error(Errc::Unbounded, "region needs a bounding box");
    const size_t n = L.ambient_dim;
    if (R.box->dim() != n) throw Error(Errc::InvalidArgument, "box dimension mismatch");
    const size_t r = L.rank();
    if (r > 10) throw Error(Errc::RankTooLarge, "rank above 10");
    if (r == 0) {
        IntVec z(n, 0);
        bool in = R.contains(z);
        if (in && opt.points) opt.points->push_back(z);
        return in ? 1 : 0;
    }
    std::vector<IntVec> b = lll_reduce(L.basis);
    std::stable_sort(b.begin(), b.end(), [](const IntVec& x, const IntVec& y) { return norm2(x) < norm2(y); });

    // Floating Gram-Schmidt for the outer levels: c_j = <x - P, b*_j> / |b*_j|^2.
    std::vector<std::vector<long double>> bs(r, std::vector<long double>(n));
    std::vector<long double> bs2(r);
    for (size_t i = 0; i < r; ++i) {
        for (size_t t = 0; t < n; ++t) bs[i][t] = b[i][t].get_d();
        for (size_t j = 0; j < i; ++j) {
            long double d = 0;
            for (size_t t = 0; t < n; ++t) d += b[i][t].get_d() * bs[j][t];
            long double mu = d / bs2[j];
            for (size_t t = 0; t < n; ++t) bs[i][t] -= mu * bs[j][t];
        }
        bs2[i] = 0;
        for (size_t t = 0; t < n; ++t) bs2[i] += bs[i][t] * bs[i][t];
    }
    std::vector<long double> range_lo(r), range_hi(r);
    for (size_t j = 0; j < r; ++j) {
        long double lo = 0, hi = 0;
        for (size_t t = 0; t < n; ++t) {
            long double a = R.box->iv[t].first.get_d() * bs[j][t];
            long double c = R.box->iv[t].second.get_d() * bs[j][t];
            lo += std::min(a, c);
            hi += std::max(a, c);
        }
        range_lo[j] = lo;
        range_hi[j] = hi;
    }
    std::vector<Rational> fb0(R.constraints.size());
    for (size_t c = 0; c < R.constraints.size(); ++c) fb0[c] = dot(R.constraints[c].f, b[0]);

    u64 count = 0, nodes = 0;
    IntVec P(n, 0);
    std::function<void(size_t)> rec = [&](size_t j) {
        if (++nodes > opt.budget) throw Error(Errc::BudgetExceeded, "lattice point enumeration");
        if (j == 0) {
            Rational lo, hi;
            bool has = false;
            for (size_t t = 0; t < n; ++t)
                if (!clip(lo, hi, has, Rational(P[t]), Rational(b[0][t]), R.box->iv[t].first, R.box->iv[t].second)) return;
            for (size_t c = 0; c < R.constraints.size(); ++c)
                if (!clip(lo, hi, has, Rational(dot(R.constraints[c].f, P)), fb0[c], R.constraints[c].lo, R.constraints[c].hi)) return;
            Int a = ceil_q(lo), z = floor_q(hi);
            if (z < a) return;
            Int cnt = z - a + 1;
            count += cnt.get_ui();
            if (count > opt.budget) throw Error(Errc::BudgetExceeded, "lattice point enumeration");
            if (opt.points)
                for (Int c = a; c <= z; ++c) {
                    IntVec x = P;
                    for (size_t t = 0; t < n; ++t) x[t] += c * b[0][t];
                    opt.points->push_back(std::move(x));
                }
            return;
        }
        long double pd = 0;
        for (size_t t = 0; t < n; ++t) pd += P[t].get_d() * bs[j][t];
        long double margin = 1e-9L * (std::fabs(range_lo[j]) + std::fabs(range_hi[j]) + std::fabs(pd) + 1);
        long lo = static_cast<long>(std::ceil((range_lo[j] - pd - margin) / bs2[j]));
        long hi = static_cast<long>(std::floor((range_hi[j] - pd + margin) / bs2[j]));
        for (long c = lo; c <= hi; ++c) {
            for (size_t t = 0; t < n; ++t) P[t] += b[j][t] * c;
            rec(j - 1);
            for (size_t t = 0; t < n; ++t) P[t] -= b[j][t] * c;
        }
    };
    rec(r - 1);
    if (opt.points) std::sort(opt.points->begin(), opt.points->end());
    return count;
}

namespace {

struct HalfSpace {
    std::vector<Rational> a;  // a . x <= b
    Rational b;
};

std::vector<HalfSpace> halfspaces(const LinearRegion& R)
{
    const size_t d = R.box->dim();
    std::vector<HalfSpace> hs;
    for (size_t t = 0; t < d; ++t) {
        std::vector<Rational> e(d, 0);
        e[t] = 1;
        hs.push_back({e, R.box->iv[t].second});
        e[t] = -1;
        hs.push_back({e, -R.box->iv[t].first});
    }
    for (const auto& c : R.constraints) {
        std::vector<Rational> a(d), na(d);
        for (size_t t = 0; t < d; ++t) {
            a[t] = c.f[t];
            na[t] = -c.f[t];
        }
        hs.push_back({a, c.hi});
        hs.push_back({na, -c.lo});
    }
    return hs;
}

std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs)
{
    const size_t d = m.size();
    for (size_t c = 0; c < d; ++c) {
        size_t p = c;
        while (p < d && m[p][c] == 0) ++p;
        if (p == d) return std::nullopt;
        std::swap(m[p], m[c]);
        std::swap(rhs[p], rhs[c]);
        for (size_t i = 0; i < d; ++i) {
            if (i == c || m[i][c] == 0) continue;
            Rational f = m[i][c] / m[c][c];
            for (size_t j = c; j < d; ++j) m[i][j] -= f * m[c][j];
            rhs[i] -= f * rhs[c];
        }
    }
    for (size_t i = 0; i < d; ++i) rhs[i] /= m[i][i];
    return rhs;
}

size_t affine_dim(const std::vector<std::vector<Rational>>& pts, const std::vector<size_t>& idx)
{
    if (idx.size() <= 1) return 0;
    const size_t d = pts[0].size();
    std::vector<std::vector<Rational>> m;
    for (size_t i = 1; i < idx.size(); ++i) {
        std::vector<Rational> row(d);
        for (size_t t = 0; t < d; ++t) row[t] = pts[idx[i]][t] - pts[idx[0]][t];
        m.push_back(row);
    }
    size_t r = 0;
    for (size_t c = 0; c < d && r < m.size(); ++c) {
        size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        for (size_t i = r + 1; i < m.size(); ++i) {
            if (m[i][c] == 0) continue;
            Rational f = m[i][c] / m[r][c];
            for (size_t j = c; j < d; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

// Pulling triangulation of the face spanned by `face` (vertex indices), of affine dimension `dim`.
void triangulate(const std::vector<std::vector<Rational>>& pts, const std::vector<HalfSpace>& hs, const std::vector<size_t>& face,
                 size_t dim, std::vector<std::vector<size_t>>& out)
{
    if (dim == 0) {
        out.push_back({face[0]});
        return;
    }
    const size_t apex = face[0];
    std::set<std::vector<size_t>> facets;
    for (const auto& h : hs) {
        std::vector<size_t> on;
        for (size_t v : face) {
            Rational s = 0;
            for (size_t t = 0; t < h.a.size(); ++t) s += h.a[t] * pts[v][t];
            if (s == h.b) on.push_back(v);
        }
        if (on.size() == face.size() || on.empty()) continue;
        if (std::find(on.begin(), on.end(), apex) != on.end()) continue;
        if (affine_dim(pts, on) != dim - 1) continue;
        facets.insert(on);
    }
    for (const auto& f : facets) {
        std::vector<std::vector<size_t>> sub;
        triangulate(pts, hs, f, dim - 1, sub);
        for (auto& s : sub) {
            s.push_back(apex);
            out.push_back(std::move(s));
        }
    }
}

Rational exact_polytope_volume(const LinearRegion& R)
{
    const size_t d = R.box->dim();
    auto hs = halfspaces(R);
    std::vector<std::vector<Rational>> verts;
    for (const auto& combo : colex_subsets(hs.size(), d)) {
        std::vector<std::vector<Rational>> m;
        std::vector<Rational> rhs;
        for (size_t i : combo) {
            m.push_back(hs[i].a);
            rhs.push_back(hs[i].b);
        }
        auto x = solve_square(m, rhs);
        if (!x) continue;
        bool ok = true;
        for (const auto& h : hs) {
            Rational s = 0;
            for (size_t t = 0; t < d; ++t) s += h.a[t] * (*x)[t];
            if (s > h.b) {
                ok = false;
                break;
            }
        }
        if (ok && std::find(verts.begin(), verts.end(), *x) == verts.end()) verts.push_back(*x);
    }
    if (verts.size() <= d) return 0;
    std::sort(verts.begin(), verts.end());
    std::vector<size_t> all(verts.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    if (affine_dim(verts, all) < d) return 0;
    std::vector<std::vector<size_t>> simplices;
    triangulate(verts, hs, all, d, simplices);
    Rational vol = 0;
    Int fact = 1;
    for (size_t i = 2; i <= d; ++i) fact *= static_cast<unsigned long>(i);
    for (const auto& s : simplices) {
        std::vector<std::vector<Rational>> m(d, std::vector<Rational>(d));
        for (size_t i = 0; i < d; ++i)
            for (size_t t = 0; t < d; ++t) m[i][t] = verts[s[i]][t] - verts[s[d]][t];
        // determinant by elimination
        Rational det = 1;
        for (size_t c = 0; c < d; ++c) {
            size_t p = c;
            while (p < d && m[p][c] == 0) ++p;
            if (p == d) {
                det = 0;
                break;
            }
            if (p != c) {
                std::swap(m[p], m[c]);
                det = -det;
            }
            det *= m[c][c];
            for (size_t i = c + 1; i < d; ++i) {
                Rational f = m[i][c] / m[c][c];
                for (size_t j = c; j < d; ++j) m[i][j] -= f * m[c][j];
            }
        }
        vol += abs(det) / Rational(fact);
    }
    return vol;
}

}  // namespace

VolumeResult region_volume(const LinearRegion& R, u64 seed, u64 samples)
{
    if (!R.box) throw Error(Errc::Unbounded, "region needs a bounding box");
    VolumeResult out;
    const size_t d = R.box->dim();
    if (d <= 4) {
        out.exact = true;
        out.exact_value = R.constraints.empty() ? R.box->volume() : exact_polytope_volume(R);
        out.value = out.exact_value.get_d();
        return out;
    }
    // Stratify along the first coordinate.
    const u64 strata = 64;
    const u64 per = std::max<u64>(2, samples / strata);
    const double lo0 = R.box->iv[0].first.get_d(), hi0 = R.box->iv[0].second.get_d();
    double box_vol = R.box->volume().get_d();
    double est = 0, var = 0;
    for (u64 s = 0; s < strata; ++s) {
        std::mt19937_64 rng(stream_seed(seed, s));
        std::uniform_real_distribution<double> u(0, 1);
        u64 hit = 0;
        std::vector<double> x(d);
        for (u64 i = 0; i < per; ++i) {
            x[0] = lo0 + (hi0 - lo0) * (static_cast<double>(s) + u(rng)) / static_cast<double>(strata);
            for (size_t t = 1; t < d; ++t) {
                double a = R.box->iv[t].first.get_d(), b = R.box->iv[t].second.get_d();
                x[t] = a + (b - a) * u(rng);
            }
            bool in = true;
            for (const auto& c : R.constraints) {
                double v = 0;
                for (size_t t = 0; t < d; ++t) v += c.f[t].get_d() * x[t];
                if (v < c.lo.get_d() || v > c.hi.get_d()) {
                    in = false;
                    break;
                }
            }
            hit += in;
        }
        double frac = static_cast<double>(hit) / static_cast<double>(per);
        double sv = box_vol / static_cast<double>(strata);
        est += sv * frac;
        var += sv * sv * frac * (1 - frac) / static_cast<double>(per);
    }
    out.value = est;
    out.stderr_ = std::sqrt(var);
    return out;
}

DavenportEstimate davenport_estimate(const IntLattice& L, const LinearRegion& R, u64 seed)
{
    if (!R.box) throw Error(Errc::Unbounded, "region needs a bounding box");
    if (L.rank() != L.ambient_dim) throw Error(Errc::InvalidArgument, "estimate needs a full-rank lattice");
    DavenportEstimate e;
    VolumeResult v = region_volume(R, seed);
    e.volume = v.value;
    e.volume_exact = v.exact;
    e.volume_stderr = v.stderr_;
    e.det = std::sqrt(gram_det(L).get_d());
    e.main_term = e.volume / e.det;
    ReducedBasis rb = reduced_basis(L);
    double B = 0;
    for (const auto& [lo, hi] : R.box->iv) B = std::max({B, std::fabs(lo.get_d()), std::fabs(hi.get_d())});
    for (const auto& m : rb.minima2) e.minima.push_back(std::sqrt(m.get_d()));
    double err = 1, prod = 1, pw = 1;
    for (size_t j = 0; j + 1 < e.minima.size(); ++j) {
        prod *= e.minima[j];
        pw *= B;
        err += pw / prod;
    }
    e.error_bound = err;
    return e;
}

namespace {

size_t small_rank_mod_p(u64 (&m)[8][16], size_t rows, size_t cols, u64 p)
{
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        if (piv != r)
            for (size_t j = 0; j < cols; ++j) std::swap(m[r][j], m[piv][j]);
        u64 inv = invmod(m[r][c], p);
        for (size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) continue;
            u64 f = m[i][c] * inv % p;
            for (size_t j = c; j < cols; ++j) m[i][j] = (m[i][j] + p * p - f * m[r][j]) % p;
        }
        ++r;
    }
    return r;
}

}  // namespace

u64 fp_wedge_census(u64 p, const FieldSpec& ctx, u64 budget)
{
    const int n = ctx.n, k = ctx.k;
    if (k > 8 || n > 16 || p > 1000000) throw Error(Errc::InvalidArgument, "census dimensions too large");
    long double total = std::pow(static_cast<long double>(p), n);
    if (total > static_cast<long double>(budget)) throw Error(Errc::BudgetExceeded, "p^n exceeds the census budget");
    // constraint_rows is linear in b: rows(b) = sum_j b_j rows(e_j).
    std::vector<std::vector<std::vector<u64>>> basis_rows(n);
    for (int j = 0; j < n; ++j) {
        IntVec e(n, 0);
        e[j] = 1;
        IntMatrix rows = constraint_rows(e, ctx);
        basis_rows[j].assign(k, std::vector<u64>(n));
        for (int i = 0; i < k; ++i)
            for (int t = 0; t < n; ++t) basis_rows[j][i][t] = mod_of(rows(i, t), p);
    }
    std::vector<u64> b(n, 0);
    u64 count = 0;
    u64 m[8][16];
    const u64 N = static_cast<u64>(total);
    for (u64 idx = 0; idx < N; ++idx) {
        for (int i = 0; i < k; ++i)
            for (int t = 0; t < n; ++t) {
                u64 s = 0;
                for (int j = 0; j < n; ++j)
                    if (b[j]) s += b[j] * basis_rows[j][i][t] % p;
                m[i][t] = s % p;
            }
        if (small_rank_mod_p(m, k, n, p) < static_cast<size_t>(k)) ++count;
        for (int j = 0; j < n; ++j) {
            if (++b[j] < p) break;
            b[j] = 0;
        }
    }
    return count;
}

std::string CensusReport::csv() const
{
    std::ostringstream os;
    os.precision(17);
    os << param_name << ",count,reference,ratio,extra\n";
    for (const auto& r : rows) os << r.param << ',' << r.count << ',' << r.reference << ',' << r.ratio << ',' << r.extra << '\n';
    return os.str();
}

nlohmann::json CensusReport::summary() const
{
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& r : rows)
        rs.push_back({{param_name, r.param}, {"count", r.count}, {"reference", r.reference}, {"ratio", r.ratio}, {"extra", r.extra}});
    return {{"param", param_name}, {"rows", rs}, {"samples", samples}, {"degenerate", degenerate}, {"max_ratio", max_ratio}};
}

CensusReport skew_census(const FieldSpec& ctx, double A, long B, u64 samples, const std::vector<double>& kappas, u64 seed,
                         unsigned threads)
{
    const int n = ctx.n, k = ctx.k;
    if (n - 2 * k < 0) throw Error(Errc::InvalidArgument, "pairs need n >= 2k");
    struct Sample {
        double wedge2 = 0;  // ||w||^2 / B^{4k}
        double inv_det = 0;
        bool degenerate = false;
    };
    std::vector<Sample> res(samples);
    const double B4k = std::pow(static_cast<double>(B), 4.0 * k);
    auto draw = [&](std::mt19937_64& rng) {
        std::uniform_int_distribution<long> d(-2 * B, 2 * B);
        const long lo2 = B * B, hi2 = 4 * B * B;
        while (true) {
            IntVec v(n);
            long s = 0;
            for (auto& x : v) {
                long t = d(rng);
                x = t;
                s += t * t;
            }
            if (s >= lo2 && s <= hi2) return v;
        }
    };
    auto work = [&](unsigned tid) {
        for (u64 i = tid; i < samples; i += threads) {
            std::mt19937_64 rng(stream_seed(seed, i));
            IntVec b1 = draw(rng), b2 = draw(rng);
            WedgeVec w = wedge_pair(b1, b2, ctx);
            Sample s;
            if (w.is_zero()) {
                s.degenerate = true;
            } else {
                Int c = w.content();
                s.wedge2 = w.norm2().get_d() / B4k;
                s.inv_det = c.get_d() / std::sqrt(w.norm2().get_d());
            }
            res[i] = s;
        }
    };
    if (threads < 1) threads = 1;
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
    work(0);
    for (auto& t : pool) t.join();

    // Volume of {a in R^{n-2k} : A <= |a| <= 2A}.
    const int d = n - 2 * k;
    double unit = std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1);
    double shell = unit * (std::pow(2 * A, d) - std::pow(A, d));

    CensusReport rep;
    rep.param_name = "kappa";
    rep.samples = samples;
    for (const auto& s : res) rep.degenerate += s.degenerate;
    for (double kappa : kappas) {
        CensusRow row;
        row.param = kappa;
        double weighted = 0;
        for (const auto& s : res)
            if (s.degenerate || s.wedge2 <= kappa * kappa) {
                ++row.count;
                if (!s.degenerate) weighted += shell * s.inv_det;
            }
        double freq = static_cast<double>(row.count) / static_cast<double>(samples);
        row.reference = std::pow(kappa, 1.0 / k);
        row.ratio = row.reference > 0 ? freq / row.reference : 0;
        row.extra = weighted / static_cast<double>(samples);
        rep.max_ratio = std::max(rep.max_ratio, row.ratio);
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace normform
