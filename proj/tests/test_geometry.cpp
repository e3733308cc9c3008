#include "normform/geometry.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace normform;

namespace {

IntLattice standard(size_t n)
{
    IntLattice L{n, {}};
    for (size_t i = 0; i < n; ++i) {
        IntVec e(n, 0);
        e[i] = 1;
        L.basis.push_back(e);
    }
    return L;
}

// Scan every integer point of the box and test membership directly.
u64 brute_count(const IntLattice& L, const LinearRegion& R)
{
    const size_t n = L.ambient_dim;
    IntVec lo(n), hi(n);
    for (size_t t = 0; t < n; ++t) {
        mpz_cdiv_q(lo[t].get_mpz_t(), R.box->iv[t].first.get_num_mpz_t(), R.box->iv[t].first.get_den_mpz_t());
        mpz_fdiv_q(hi[t].get_mpz_t(), R.box->iv[t].second.get_num_mpz_t(), R.box->iv[t].second.get_den_mpz_t());
    }
    IntVec x = lo;
    u64 c = 0;
    while (true) {
        if (R.contains(x) && contains(L, x)) ++c;
        size_t i = 0;
        while (i < n && x[i] == hi[i]) {
            x[i] = lo[i];
            ++i;
        }
        if (i == n) break;
        x[i] += 1;
    }
    return c;
}

}  // namespace

TEST_CASE("counting points in boxes")
{
    LinearRegion R;
    R.box = AxisBox::cube(2, 0, 10);
    CHECK(points_in_region(standard(2), R) == 121);
    IntLattice even{2, {to_int_vec({2, 0}), to_int_vec({0, 1})}};
    CHECK(points_in_region(even, R) == 66);
    std::vector<IntVec> pts;
    CountOptions opt;
    opt.points = &pts;
    CHECK(points_in_region(even, R, opt) == 66);
    CHECK(pts.size() == 66);
    for (const auto& p : pts) CHECK(p[0] % 2 == 0);

    LinearRegion tri;
    tri.box = AxisBox::cube(2, 0, 10);
    tri.constraints.push_back({to_int_vec({1, 1}), 0, 10});
    CHECK(points_in_region(standard(2), tri) == 66);

    LinearRegion unbounded;
    CHECK_THROWS_AS(points_in_region(standard(2), unbounded), Error);
    opt.points = nullptr;
    opt.budget = 10;
    CHECK_THROWS_AS(points_in_region(standard(2), R, opt), Error);
}

TEST_CASE("counting agrees with an ambient scan")
{
    std::mt19937_64 rng(41);
    for (int it = 0; it < 25; ++it) {
        IntLattice L{4, {oracle::random_vec(rng, 4, 4), oracle::random_vec(rng, 4, 4)}};
        if (rank(IntMatrix::from_rows(L.basis)) < 2) continue;
        LinearRegion R;
        R.box = AxisBox::cube(4, Rational(-7, 2), 6);
        R.constraints.push_back({oracle::random_vec(rng, 4, 3), -5, Rational(17, 3)});
        CHECK(points_in_region(L, R) == brute_count(L, R));
    }
    for (int it = 0; it < 10; ++it) {
        IntLattice L{3, {oracle::random_vec(rng, 3, 5), oracle::random_vec(rng, 3, 5), oracle::random_vec(rng, 3, 5)}};
        if (rank(IntMatrix::from_rows(L.basis)) < 3) continue;
        LinearRegion R;
        R.box = AxisBox::cube(3, -9, 9);
        CHECK(points_in_region(L, R) == brute_count(L, R));
    }
}

TEST_CASE("exact polytope volumes")
{
    LinearRegion tri;
    tri.box = AxisBox::cube(2, 0, 1);
    tri.constraints.push_back({to_int_vec({1, 1}), 0, 1});
    auto v = region_volume(tri);
    CHECK(v.exact);
    CHECK(v.exact_value == Rational(1, 2));

    LinearRegion simplex3;
    simplex3.box = AxisBox::cube(3, 0, 1);
    simplex3.constraints.push_back({to_int_vec({1, 1, 1}), 0, 1});
    CHECK(region_volume(simplex3).exact_value == Rational(1, 6));

    // Slab |x + y + z + w| <= 1 in [0,1]^4: the simplex of the 4-cube.
    LinearRegion s4;
    s4.box = AxisBox::cube(4, 0, 1);
    s4.constraints.push_back({to_int_vec({1, 1, 1, 1}), -1, 1});
    CHECK(region_volume(s4).exact_value == Rational(1, 24));

    // Cube with a middle slab: 1/2 <= x + y <= 3/2 in the unit square has area 3/4.
    LinearRegion band;
    band.box = AxisBox::cube(2, 0, 1);
    band.constraints.push_back({to_int_vec({1, 1}), Rational(1, 2), Rational(3, 2)});
    CHECK(region_volume(band).exact_value == Rational(3, 4));

    LinearRegion empty;
    empty.box = AxisBox::cube(3, 0, 1);
    empty.constraints.push_back({to_int_vec({1, 0, 0}), 2, 3});
    CHECK(region_volume(empty).exact_value == 0);

    LinearRegion s5;
    s5.box = AxisBox::cube(5, 0, 1);
    s5.constraints.push_back({to_int_vec({1, 1, 1, 1, 1}), 0, 1});
    auto mc = region_volume(s5, 3, 400000);
    CHECK(!mc.exact);
    CHECK(std::fabs(mc.value - 1.0 / 120) < 5 * mc.stderr_ + 1e-4);
}

TEST_CASE("Davenport estimate")
{
    LinearRegion R;
    R.box = AxisBox::cube(2, -20, 20);
    auto e = davenport_estimate(standard(2), R);
    CHECK(e.main_term == doctest::Approx(1600));
    CHECK(std::fabs(1681 - e.main_term) <= 2 * e.error_bound * 40);

    IntLattice scaled{2, {to_int_vec({3, 0}), to_int_vec({0, 3})}};
    auto s = davenport_estimate(scaled, R);
    CHECK(s.main_term == doctest::Approx(1600.0 / 9));

    IntLattice sub{3, {to_int_vec({1, 0, 0}), to_int_vec({0, 1, 0})}};
    CHECK_THROWS_AS(davenport_estimate(sub, R), Error);

    // |count - main| / error_bound stays bounded on random full-rank lattices.
    std::mt19937_64 rng(51);
    double worst = 0;
    for (int it = 0; it < 50; ++it) {
        IntLattice L{3, {oracle::random_vec(rng, 3, 5), oracle::random_vec(rng, 3, 5), oracle::random_vec(rng, 3, 5)}};
        if (rank(IntMatrix::from_rows(L.basis)) < 3) continue;
        LinearRegion B;
        B.box = AxisBox::cube(3, -15, 15);
        B.constraints.push_back({to_int_vec({1, 2, -1}), -12, 20});
        auto d = davenport_estimate(L, B);
        double c = static_cast<double>(points_in_region(L, B));
        worst = std::max(worst, std::fabs(c - d.main_term) / d.error_bound);
    }
    CHECK(worst < 60);
}

TEST_CASE("wedge census over F_p")
{
    auto one = make_context(std::vector<long>{-2, 0, 0, 1}, 1);
    // For k = 1 only b = 0 has a zero row.
    CHECK(fp_wedge_census(5, one, 1000000) == 1);

    auto c = make_context(std::vector<long>{-2, 0, 0, 0, 0, 0, 0, 1}, 2);
    for (u64 p : {3ull, 5ull}) {
        u64 roots = 0;
        for (u64 x = 0; x < p; ++x) roots += powmod(x, 7, p) == 2 % p;
        CHECK(fp_wedge_census(p, c, 100000000) == 1 + roots * (p - 1));
    }
    CHECK_THROWS_AS(fp_wedge_census(101, c, 1000), Error);
}

TEST_CASE("skew census")
{
    auto c = make_context(std::vector<long>{-2, 0, 0, 0, 0, 0, 0, 1}, 2);
    auto rep = skew_census(c, 5.0, 6, 400, {0.0, 1e-3, 1e-1, 1e6}, 7, 2);
    REQUIRE(rep.rows.size() == 4);
    CHECK(rep.rows[0].count == rep.degenerate);
    CHECK(rep.rows[3].count == rep.samples);
    for (size_t i = 1; i < rep.rows.size(); ++i) CHECK(rep.rows[i].count >= rep.rows[i - 1].count);
    auto again = skew_census(c, 5.0, 6, 400, {0.0, 1e-3, 1e-1, 1e6}, 7, 1);
    CHECK(again.csv() == rep.csv());
}
