#include "normform/lattice.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace normform;

namespace {

Int minors_gcd(const std::vector<IntVec>& basis) { return maximal_minors(IntMatrix::from_rows(basis)).content(); }

// Successive minima by scanning every ambient point with sup-norm <= bound.
std::vector<Int> brute_minima(const IntLattice& L, long bound)
{
    const size_t n = L.ambient_dim;
    std::vector<IntVec> pts;
    IntVec x(n, -bound);
    while (true) {
        if (!is_zero(x) && contains(L, x)) pts.push_back(x);
        size_t i = 0;
        while (i < n && x[i] == bound) x[i++] = -bound;
        if (i == n) break;
        x[i] += 1;
    }
    std::sort(pts.begin(), pts.end(), [](const IntVec& a, const IntVec& b) { return norm2(a) < norm2(b); });
    std::vector<IntVec> chosen;
    std::vector<Int> out;
    for (const auto& p : pts) {
        chosen.push_back(p);
        if (rank(IntMatrix::from_rows(chosen)) < chosen.size()) {
            chosen.pop_back();
            continue;
        }
        out.push_back(norm2(p));
        if (out.size() == L.rank()) break;
    }
    return out;
}

}  // namespace

TEST_CASE("colex order")
{
    auto s = colex_subsets(4, 2);
    std::vector<std::vector<size_t>> expect{{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {2, 3}};
    CHECK(s == expect);
    CHECK(colex_subsets(5, 0).size() == 1);
    CHECK(colex_subsets(7, 3).size() == 35);
}

TEST_CASE("wedge vectors")
{
    auto c = make_context(std::vector<long>{-2, 0, 0, 0, 1}, 1);
    auto w = wedge(to_int_vec({1, 0, 0, 0}), c);
    CHECK(w.entries == to_int_vec({0, 0, 0, 1}));
    CHECK(det_squared_formula(w) == 1);

    WedgeVec h{1, to_int_vec({2, 4, 6})};
    CHECK(det_squared_formula(h) == 14);
    CHECK_THROWS_AS(det_squared_formula(WedgeVec{1, to_int_vec({0, 0})}), Error);

    std::mt19937_64 rng(1);
    for (const auto& tf : oracle::fields()) {
        auto ctx = make_context(tf.f, tf.k);
        for (int it = 0; it < 10; ++it) {
            auto v = oracle::random_nonzero(rng, ctx.n, 6);
            auto wv = wedge(v, ctx);
            if (ctx.k == 1) CHECK(wv.entries == constraint_rows(v, ctx).row(0));
            IntVec v3(v);
            for (auto& x : v3) x *= -3;
            auto w3 = wedge(v3, ctx);
            Int f = 1;
            for (int i = 0; i < ctx.k; ++i) f *= -3;
            for (size_t i = 0; i < wv.entries.size(); ++i) CHECK(w3.entries[i] == f * wv.entries[i]);
        }
    }
}

TEST_CASE("lambda_v basics")
{
    auto c = make_context(std::vector<long>{-2, 0, 0, 0, 1}, 1);
    auto L = lambda_v(to_int_vec({1, 0, 0, 0}), c);
    CHECK(L.rank() == 3);
    CHECK(gram_det(L) == 1);
    for (const auto& b : L.basis) CHECK(b[3] == 0);

    std::mt19937_64 rng(2);
    for (const auto& tf : oracle::fields()) {
        auto ctx = make_context(tf.f, tf.k);
        for (int it = 0; it < 10; ++it) {
            auto v = oracle::random_nonzero(rng, ctx.n, 8);
            auto Lv = lambda_v(v, ctx);
            REQUIRE(Lv.rank() == static_cast<size_t>(ctx.n - ctx.k));
            CHECK(minors_gcd(Lv.basis) == 1);
            for (int s = 0; s < 10; ++s) {
                IntVec x(ctx.n, 0);
                auto coef = oracle::random_vec(rng, Lv.rank(), 5);
                for (size_t i = 0; i < Lv.rank(); ++i)
                    for (int j = 0; j < ctx.n; ++j) x[j] += coef[i] * Lv.basis[i][j];
                auto prod = oracle::mul_mod_f(x, v, ctx.f);
                for (int j = ctx.n - ctx.k; j < ctx.n; ++j) CHECK(prod[j] == 0);
                // An integral rational combination must have integral coefficients.
                bool divisible = true;
                for (auto& e : x) divisible = divisible && (e % 7 == 0);
                if (divisible)
                    for (auto& q : coef) CHECK(q % 7 == 0);
            }
            IntVec v5(v);
            for (auto& x : v5) x *= 5;
            auto L5 = lambda_v(v5, ctx);
            CHECK(same_lattice(L5, Lv));
            CHECK(gram_det(L5) == gram_det(Lv));
            CHECK(same_lattice(kernel_oracle(constraint_rows(v, ctx)), Lv));
            CHECK(det_squared_formula(wedge(v, ctx)) == gram_det(Lv));
        }
    }
}

TEST_CASE("kernel oracle")
{
    IntMatrix e(1, 4);
    e(0, 3) = 1;
    auto K = kernel_oracle(e);
    CHECK(K.rank() == 3);
    CHECK(gram_det(K) == 1);
    IntMatrix ones(1, 3);
    ones(0, 0) = ones(0, 1) = ones(0, 2) = 1;
    CHECK(gram_det(kernel_oracle(ones)) == 3);
    IntMatrix d(2, 3);
    d(0, 0) = 2;
    d(1, 1) = 3;
    auto Kd = kernel_oracle(d);
    REQUIRE(Kd.rank() == 1);
    CHECK(gram_det(Kd) == 1);
    IntMatrix dep(2, 3);
    dep(0, 0) = 1, dep(0, 1) = 2;
    dep(1, 0) = 2, dep(1, 1) = 4;
    CHECK_THROWS_AS(kernel_oracle(dep), Error);
    // (2, 6, 4): kernel lattice has det^2 = (4 + 36 + 16) / 4 = 14.
    IntMatrix t(1, 3);
    t(0, 0) = 2, t(0, 1) = 6, t(0, 2) = 4;
    CHECK(gram_det(kernel_oracle(t)) == 14);
}

TEST_CASE("gram_det")
{
    IntLattice z{3, {to_int_vec({1, 0, 0}), to_int_vec({0, 1, 0}), to_int_vec({0, 0, 1})}};
    CHECK(gram_det(z) == 1);
    IntLattice b{2, {to_int_vec({1, 1}), to_int_vec({0, 2})}};
    CHECK(gram_det(b) == 4);
    std::mt19937_64 rng(4);
    for (int it = 0; it < 100; ++it) {
        IntLattice L{4, {oracle::random_vec(rng, 4, 9), oracle::random_vec(rng, 4, 9)}};
        Int g = gram_det(L);
        std::uniform_int_distribution<long> d(-5, 5);
        long q = d(rng);
        IntLattice M = L;
        for (int j = 0; j < 4; ++j) M.basis[1][j] += q * M.basis[0][j];
        std::swap(M.basis[0], M.basis[1]);
        CHECK(gram_det(M) == g);
    }
}

TEST_CASE("pairs")
{
    auto c = make_context(std::vector<long>{-2, 0, 0, 0, 1}, 1);
    auto v = to_int_vec({1, 2, 0, -1});
    CHECK(std::holds_alternative<DegeneratePair>(try_lambda_pair(v, v, c)));
    CHECK_THROWS_AS(lambda_pair(v, v, c), Error);

    std::mt19937_64 rng(9);
    for (const auto& tf : oracle::fields()) {
        auto ctx = make_context(tf.f, tf.k);
        if (ctx.n < 2 * ctx.k + 1) continue;
        for (int it = 0; it < 10; ++it) {
            auto v1 = oracle::random_nonzero(rng, ctx.n, 6);
            auto v2 = oracle::random_nonzero(rng, ctx.n, 6);
            auto r = try_lambda_pair(v1, v2, ctx);
            if (std::holds_alternative<DegeneratePair>(r)) continue;
            auto& L = std::get<IntLattice>(r);
            CHECK(L.rank() == static_cast<size_t>(ctx.n - 2 * ctx.k));
            CHECK(same_lattice(L, intersect(lambda_v(v1, ctx), lambda_v(v2, ctx))));
            CHECK(same_lattice(L, kernel_oracle(stacked_constraints(v1, v2, ctx))));
            CHECK(det_squared_formula(wedge_pair(v1, v2, ctx)) == gram_det(L));
        }
    }
}

TEST_CASE("reduced bases and successive minima")
{
    IntLattice z{3, {to_int_vec({1, 0, 0}), to_int_vec({0, 1, 0}), to_int_vec({0, 0, 1})}};
    auto rz = reduced_basis(z);
    CHECK(rz.minima_exact);
    for (auto& m : rz.minima2) CHECK(m == 1);

    IntLattice s{2, {to_int_vec({1, 0}), to_int_vec({100, 1})}};
    auto rs = reduced_basis(s);
    CHECK(rs.minima2[0] == 1);
    CHECK(rs.minima2[1] <= 4);
    CHECK(rs.minima2 == brute_minima(s, 101));

    std::mt19937_64 rng(21);
    for (int it = 0; it < 30; ++it) {
        IntLattice L{3, {oracle::random_vec(rng, 3, 6), oracle::random_vec(rng, 3, 6)}};
        if (rank(IntMatrix::from_rows(L.basis)) < 2) continue;
        auto rb = reduced_basis(L);
        REQUIRE(rb.minima_exact);
        long bound = static_cast<long>(std::sqrt(rb.minima2.back().get_d())) + 1;
        CHECK(rb.minima2 == brute_minima(L, bound));
        double prod = 1;
        for (auto& l : rb.lengths2) prod *= std::sqrt(l.get_d());
        CHECK(prod <= std::pow(2.0, 4.0) * std::sqrt(gram_det(L).get_d()) + 1e-9);
        CHECK(rb.orthogonality > 0);
        CHECK(rb.orthogonality <= 1.0 + 1e-12);
    }
    IntLattice big{11, {}};
    for (int i = 0; i < 11; ++i) {
        IntVec e(11, 0);
        e[i] = 1;
        big.basis.push_back(e);
    }
    CHECK_THROWS_AS(reduced_basis(big), Error);
}

TEST_CASE("nice bases")
{
    std::mt19937_64 rng(31);
    for (const auto& tf : oracle::fields()) {
        auto ctx = make_context(tf.f, tf.k);
        if (!ctx.pure_theta || ctx.n < 2 * ctx.k + 1) continue;
        for (int it = 0; it < 5; ++it) {
            auto v = oracle::random_nonzero(rng, ctx.n, 6);
            auto nb = nice_basis(v, ctx);
            IntLattice L{static_cast<size_t>(ctx.n), nb.basis};
            CHECK(same_lattice(L, lambda_v(v, ctx)));
            CHECK(!wedge_pair(nb.basis[0], nb.basis[nb.target_index], ctx).is_zero());
            CHECK(norm2(nb.basis[0]) == nb.first_minimum2);
            auto rb = reduced_basis(lambda_v(v, ctx));
            CHECK(nb.first_minimum2 == rb.minima2[0]);
            for (const auto& x : tight_subspace(v, ctx)) CHECK(wedge_pair(x, v, ctx).is_zero());
            auto ts = tight_subspace(v, ctx);
            IntVec comb(ctx.n, 0);
            for (size_t i = 0; i < ts.size(); ++i)
                for (int j = 0; j < ctx.n; ++j) comb[j] += ts[i][j] * static_cast<long>(2 * i + 1);
            CHECK(wedge_pair(comb, v, ctx).is_zero());
        }
    }
}
