#include "caged/gauge.hpp"
#include "caged/spectral.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <queue>
#include <random>

using namespace caged;
using oracle::pi;

TEST_CASE("canonical phase vectors")
{
    auto v = canonical_phase_vector({2}, 1, pi);
    REQUIRE(v.entries.size() == 2);
    CHECK(std::abs(v.entries[0] - std::polar(1.0, pi / 4)) < 1e-15);
    CHECK(std::abs(v.entries[1] - std::polar(1.0, -pi / 4)) < 1e-15);
    CHECK(std::abs(phase_pairing(v)) < 1e-15);
    CHECK(std::abs(phase_pairing(canonical_phase_vector({2}, 1, 0)) - 2.0) < 1e-15);
    CHECK(std::abs(phase_pairing(canonical_phase_vector({3}, 1, 2 * pi / 3))) < 1e-14);
    CHECK(std::abs(phase_pairing(canonical_phase_vector({4}, 1, pi / 2))) < 1e-14);
    auto one = canonical_phase_vector({1, 3}, 1, 1.3);
    CHECK(one.entries.size() == 1);
    CHECK(one.entries[0] == cplx(1, 0));
    for (int j = 1; j <= 3; ++j)
        for (auto w : canonical_phase_vector({2, 3, 4}, j, 0.77).entries) CHECK(std::abs(std::abs(w) - 1) < 1e-12);
    CHECK_THROWS_AS(canonical_phase_vector({2}, 2, 0), InvalidParameter);
    CHECK_THROWS_AS(canonical_phase_vector({2}, 0, 0), InvalidParameter);
}

TEST_CASE("pairing vanishes exactly on the nontrivial x_j-th roots")
{
    // sweep a fine grid, direct sum vs predicate
    for (auto x : {IntSeq{2}, IntSeq{3}, IntSeq{2, 3}, IntSeq{3, 2, 2}, IntSeq{4, 1, 2}}) {
        for (int j = 1; j <= x.depth(); ++j) {
            std::int64_t pre = 1;
            for (int l = 0; l < j; ++l) pre *= x[l];
            for (std::int64_t num = -2 * pre; num <= 3 * pre; ++num) {
                const double phi = 2 * pi * static_cast<double>(num) / static_cast<double>(pre);
                const bool zero = std::abs(phase_pairing(canonical_phase_vector(x, j, phi))) < 1e-9;
                CHECK(zero == pairing_vanishes(x, j, phi));
                CHECK(zero == (x[j - 1] > 1 && num % x[j - 1] != 0));
                const double half = 2 * pi * (static_cast<double>(num) + 0.5) / static_cast<double>(pre);
                CHECK_FALSE(std::abs(phase_pairing(canonical_phase_vector(x, j, half))) < 1e-9);
                CHECK_FALSE(pairing_vanishes(x, j, half));
            }
            CHECK_FALSE(pairing_vanishes(x, j, 0.123));
        }
    }
}

TEST_CASE("canonical ccam matches the partitioned-matrix recursion")
{
    for (auto x : {IntSeq{2}, IntSeq{3}, IntSeq{2, 3, 2}, IntSeq{3, 1, 2}, IntSeq{2, 2, 2}})
        for (double phi : {0.0, 0.7, pi / 6, pi, 2.9}) {
            auto m = dense_matrix(canonical_ccam(x, phi));
            CHECK(oracle::max_abs_diff(m, oracle::block_glued_tree(x.entries(), phi)) < 1e-14);
        }
}

TEST_CASE("every plaquette carries the flux")
{
    auto zero = dense_matrix(canonical_ccam({2}, 0));
    CHECK(oracle::max_abs_diff(zero, dense_matrix(canonical_ccam({2}, 0)).real().cast<cplx>()) == 0);
    CHECK(zero.real().rowwise().sum()(0) == 2);

    auto m = canonical_ccam({2}, pi);
    for (const auto& f : m.plaquettes) {
        CHECK(std::abs(plaquette_flux(m, f) - pi) < 1e-12);
        std::vector<int> rev(f.rbegin(), f.rend());
        CHECK(std::abs(std::abs(plaquette_flux(m, rev)) - pi) < 1e-12);
    }
    auto m2 = canonical_ccam({3, 2}, 0.7);
    for (const auto& f : m2.plaquettes) {
        CHECK(std::abs(plaquette_flux(m2, f) - 0.7) < 1e-12);
        std::vector<int> rev(f.rbegin(), f.rend());
        CHECK(std::abs(plaquette_flux(m2, rev) + 0.7) < 1e-12);
    }
    for (auto x : {IntSeq{2, 3, 2}, IntSeq{4, 3}, IntSeq{2, 1, 3}, IntSeq{2, 2, 2, 2}})
        for (double phi : {0.3, -1.1, 2.5, pi / 6}) CHECK(max_flux_deviation(canonical_ccam(x, phi)) < 1e-10);
    CHECK_THROWS_AS(plaquette_flux(m, {0, 3, 1}), InvalidParameter);
}

TEST_CASE("level phases of the {2,3,2} gauge")
{
    // ω_1 = Φ/4, ω_2 = Φ, ω_3 = 3Φ/2
    const double phi = 0.4;
    CHECK(std::abs(level_omega({2, 3, 2}, 1, phi) - phi / 4) < 1e-15);
    CHECK(std::abs(level_omega({2, 3, 2}, 2, phi) - phi) < 1e-15);
    CHECK(std::abs(level_omega({2, 3, 2}, 3, phi) - 1.5 * phi) < 1e-15);
    auto m = canonical_ccam({2, 3, 2}, phi);
    CHECK(std::abs(m.phase(0, 1) - 1.5 * phi) < 1e-15);
}

TEST_CASE("gauge transforms preserve flux and spectrum")
{
    auto m = canonical_ccam({2, 3}, 1.1);
    auto same = gauge_transform(m, 3, 0.0);
    for (std::size_t i = 0; i < m.entries.size(); ++i) CHECK(same.entries[i].theta == m.entries[i].theta);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ang(-pi, pi);
    auto ref = hermitian_eigensolve(dense_matrix(m)).values;
    for (int trial = 0; trial < 20; ++trial) {
        auto g = m;
        for (int s = 0; s < 3; ++s) g = gauge_transform(g, static_cast<int>(rng() % m.dimension), ang(rng));
        CHECK(max_flux_deviation(g) < 1e-10);
        CHECK((hermitian_eigensolve(dense_matrix(g)).values - ref).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("rhombic gauge is reachable from the canonical gauge")
{
    const double phi = 0.9;
    auto canon = canonical_ccam({2}, phi);
    Ccam target = canon;
    for (auto& e : target.entries) e.theta = (e.u == 0 && e.v == 1) ? phi : 0.0;
    CHECK(max_flux_deviation(target) < 1e-12);

    // align every spanning-tree edge by transforming its far endpoint, BFS from vertex 0
    auto adj = canon.graph().adjacency();
    std::vector<bool> seen(canon.dimension);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    auto g = canon;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[u]) {
            if (seen[v]) continue;
            seen[v] = true;
            g = gauge_transform(g, v, target.phase(u, v) - g.phase(u, v));
            q.push(v);
        }
    }
    for (std::size_t i = 0; i < g.entries.size(); ++i)
        CHECK(std::abs(wrap_angle(g.entries[i].theta - target.entries[i].theta)) < 1e-12);
}

TEST_CASE("flat values")
{
    auto f = flat_values({2});
    CHECK(f.denominator == 2);
    CHECK(f.values.size() == 2);
    CHECK(std::abs(f.values[0] - pi) < 1e-15);
    CHECK(std::abs(f.values[1] - 2 * pi) < 1e-15);
    auto g = flat_values({2, 3, 2});
    CHECK(g.values.size() == 12);
    for (std::size_t z = 0; z < 12; ++z) CHECK(std::abs(g.values[z] - (z + 1) * pi / 6) < 1e-14);
    CHECK(g.contains(pi / 6));
    CHECK(g.contains(pi / 6 + 1e-12));
    CHECK_FALSE(g.contains(pi / 12));
    auto a = flat_values({4, 3}), b = flat_values({2, 6}), c = flat_values({12}), d = flat_values({3, 2, 2});
    CHECK(a.values == b.values);
    CHECK(b.values == c.values);
    CHECK(c.values == d.values);
    for (std::size_t z = 0; z < g.values.size(); ++z) {
        auto shifted = g.values[z] + 2 * pi / 12;
        CHECK(g.contains(shifted));
    }
}

TEST_CASE("uncrossable flux values")
{
    auto x = IntSeq{2, 3, 2};
    auto f = flat_values(x);
    for (std::size_t z = 0; z + 1 < f.values.size(); ++z) CHECK(is_uncrossable(x, f.values[z]));
    CHECK_FALSE(is_uncrossable(x, 2 * pi));
    CHECK_FALSE(is_uncrossable(x, 0));
    CHECK_FALSE(is_uncrossable(x, pi / 12));
}

TEST_CASE("dense matrices")
{
    auto h = dense_matrix(canonical_ccam({2}, 0));
    CHECK(h.rows() == 4);
    CHECK(h.row(0).sum() == cplx(2, 0));
    CHECK(h.row(3).sum() == cplx(2, 0));
    auto k = dense_matrix(canonical_ccam({2, 3, 2}, 1.3));
    CHECK((k - k.adjoint()).cwiseAbs().maxCoeff() == 0);
    auto ev = oracle::sorted_eigenvalues(dense_matrix(canonical_ccam({2}, pi)));
    const double r2 = std::sqrt(2.0);
    std::vector<double> want{-r2, -r2, r2, r2};
    for (int i = 0; i < 4; ++i) CHECK(std::abs(ev[i] - want[i]) < 1e-12);
    CHECK_THROWS_AS(dense_matrix(canonical_ccam({2, 2}, 0), 5), ResourceLimit);
    auto f = dense_matrix<float>(canonical_ccam({2}, pi));
    CHECK(std::abs(f(0, 1) - std::complex<float>(std::polar(1.0f, float(pi / 4)))) < 1e-6f);
}

TEST_CASE("minimum-norm phases for prescribed fluxes")
{
    auto g = grow_tree({2, 3});
    std::vector<double> fl(g.plaquettes.size());
    for (std::size_t i = 0; i < fl.size(); ++i) fl[i] = 0.1 * static_cast<double>(i) - 0.4;
    auto m = ccam_from_fluxes(g, fl, 0);
    CHECK(max_flux_deviation(m, fl) < 1e-12);
    auto tree = canonical_ccam({2, 3}, 0.8);
    auto again = ccam_from_fluxes(g, std::vector<double>(g.plaquettes.size(), 0.8), 0.8);
    CHECK((hermitian_eigensolve(dense_matrix(tree)).values - hermitian_eigensolve(dense_matrix(again)).values)
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    CHECK_THROWS_AS(ccam_from_fluxes(g, {0.1}, 0), InvalidParameter);
}
