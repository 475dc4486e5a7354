#include "caged/caging.hpp"
#include "caged/cyclotomic.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace caged;
using oracle::pi;

namespace {

double max_abs(const std::vector<cplx>& v)
{
    double m = 0;
    for (auto z : v) m = std::max(m, std::abs(z));
    return m;
}

// Residual, norm and radius recomputed from scratch on the dense matrix.
void check_state(const Eigen::MatrixXcd& h, const Graph& g, int seed, const ClsState& s)
{
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(h.rows());
    for (auto [v, a] : s.amplitudes) psi[v] = a;
    CHECK(std::abs(psi.norm() - 1) < 1e-10);
    CHECK((h * psi - s.eigenvalue * psi).norm() < 1e-8);
    auto dist = g.distances_from(seed);
    int r = 0;
    for (auto [v, a] : s.amplitudes) r = std::max(r, dist[v]);
    CHECK(r <= s.support_radius);
}

} // namespace

TEST_CASE("cyclotomic arithmetic")
{
    CHECK(cyclotomic_polynomial(1) == std::vector<std::int64_t>{-1, 1});
    CHECK(cyclotomic_polynomial(2) == std::vector<std::int64_t>{1, 1});
    CHECK(cyclotomic_polynomial(6) == std::vector<std::int64_t>{1, -1, 1});
    CHECK(cyclotomic_polynomial(12) == std::vector<std::int64_t>{1, 0, -1, 0, 1});
    auto p105 = cyclotomic_polynomial(105);
    CHECK(p105.size() == 49);
    CHECK(p105[7] == -2);   // first coefficient outside {-1,0,1}

    for (int n : {1, 5, 12, 30}) {
        CyclotomicInt all(n);
        for (int j = 0; j < n; ++j) all[j] = 1;
        CHECK((n == 1) != all.is_zero());
    }
    CyclotomicInt a(8);
    a[0] = 1;
    CyclotomicInt b(8);
    b.add_rotated(a, 4);   // zeta^4 = -1
    b.add_rotated(a, 0);
    CHECK(b.is_zero());
    CyclotomicInt c(6);
    c[1] = 2;
    c[5] = -1;
    CHECK(std::abs(c.value() - (2.0 * std::polar(1.0, pi / 3) - std::polar(1.0, 5 * pi / 3))) < 1e-14);

    CHECK(common_root_order({pi / 3, pi}) == 6);
    CHECK(common_root_order({2 * pi / 7, 0.0}) == 7);
    CHECK(common_root_order({1.0}) == 0);
}

TEST_CASE("crossing amplitudes")
{
    CHECK(max_abs(crossing_amplitudes(canonical_ccam({2}, pi), 20)) < 1e-12);
    auto zero = crossing_amplitudes(canonical_ccam({2}, 0), 4);
    CHECK(zero[0] == cplx(0));
    CHECK(std::abs(zero[1] - 2.0) < 1e-15);
    CHECK(max_abs(crossing_amplitudes(canonical_ccam({2, 3, 2}, pi / 6), 12)) < 1e-10);

    for (auto x : {IntSeq{2, 3}, IntSeq{3, 1, 2}, IntSeq{2, 2, 2}})
        for (double phi : {0.0, 0.37, pi / 3, 2.0}) {
            auto m = canonical_ccam(x, phi);
            auto h = oracle::block_glued_tree(x.entries(), phi);
            const int n = m.dimension;
            auto ref = oracle::power_corner(h, n - 1, 0, 4 * x.depth());
            auto got = crossing_amplitudes(m, 4 * x.depth());
            auto flt = crossing_amplitudes_float(m, 0, n - 1, 4 * x.depth());
            for (std::size_t k = 0; k < ref.size(); ++k) {
                CHECK(std::abs(got[k] - ref[k]) < 1e-9 * (1 + std::abs(ref[k])));
                CHECK(std::abs(flt[k] - ref[k]) < 1e-9 * (1 + std::abs(ref[k])));
            }
        }

    // off the flat set destructive interference fails
    for (auto x : {IntSeq{2}, IntSeq{2, 2}, IntSeq{2, 3}, IntSeq{3, 2, 2}}) {
        const auto big = static_cast<double>(x.product());
        for (std::int64_t z = 0; z < x.product(); ++z)
            CHECK(max_abs(crossing_amplitudes(canonical_ccam(x, 2 * pi / big * (z + 0.5)), 2 * x.depth())) > 1e-6);
    }

    Ccam bare = canonical_ccam({2}, 0);
    bare.first_vertex.reset();
    CHECK_THROWS_AS(crossing_amplitudes(bare, 3), InvalidParameter);
    CHECK(crossing_amplitudes(bare, 0, 3, 2)[1] == cplx(2));
}

TEST_CASE("resolvent recurrences against dense adjugates")
{
    auto one = resolvent_recurrence({2}, pi, {0.3, 0.7});
    CHECK(one[0].chi == cplx(0));

    auto dense_check = [](const IntSeq& x, double phi, cplx lam) {
        auto st = resolvent_recurrence(x, phi, lam);
        // nu_i = prod_{j=0}^{i-1} det(Y_j - lambda)^{-(x_{j+1} - 1)}, Y_0 a single vertex
        cplx nu = std::pow(-lam, -(x[0] - 1));
        for (int i = 1; i <= x.depth(); ++i) {
            std::vector<int> pre(x.entries().begin(), x.entries().begin() + i);
            auto y = oracle::block_glued_tree(pre, phi);
            const int n = static_cast<int>(y.rows());
            Eigen::MatrixXcd a = y - lam * Eigen::MatrixXcd::Identity(n, n);
            const auto& s = st[i - 1];
            const cplx det = oracle::charpoly(y, lam);
            CHECK(std::abs(s.delta - nu * det) < 1e-8 * std::abs(nu * det));
            const cplx ff = nu * oracle::adjugate_entry(a, 0, 0);
            CHECK(std::abs(s.phi - ff) < 1e-8 * std::abs(ff));
            const cplx lf = nu * oracle::adjugate_entry(a, n - 1, 0);
            CHECK(std::abs(s.chi - lf) < 1e-8 * std::max(std::abs(ff), 1e-300));
            if (i < x.depth()) nu /= std::pow(det, x[i] - 1);
        }
        return st;
    };
    dense_check({2}, 0, {0, 1});
    auto st = dense_check({2, 2}, pi / 2, {0.2, 0.9});
    CHECK(std::abs(st[0].chi) > 1e-3);
    CHECK(st[1].chi == cplx(0));
    dense_check({2, 3}, 0.8, {-0.4, 0.5});
    dense_check({3, 1, 2}, 1.7, {1.1, -0.3});

    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> xs(1 + rng() % 4);
        for (auto& v : xs) v = 1 + static_cast<int>(rng() % 4);
        xs.back() = std::max(xs.back(), 2);
        cplx lam(u(rng), u(rng) / 3);
        if (lam.imag() == 0) lam += cplx(0, 0.1);
        for (const auto& s : resolvent_recurrence(IntSeq(xs), u(rng), lam)) CHECK(s.identity_residual() < 1e-8);
    }
    CHECK_THROWS_AS(resolvent_recurrence({2}, 0, 0.5), InvalidParameter);
}

TEST_CASE("exchange symmetry")
{
    for (auto x : {IntSeq{2}, IntSeq{2, 3, 2}, IntSeq{3, 1, 2}, IntSeq{4, 2}})
        for (double phi : {0.0, 0.6, pi / 6, 2.4}) {
            auto m = canonical_ccam(x, phi);
            auto ex = exchange_symmetry_check(m);
            CHECK(ex.symmetric);
            CHECK(ex.commutator_norm < 1e-12);
            auto h = dense_matrix(m);
            const auto n = h.rows();
            Eigen::MatrixXcd j = Eigen::MatrixXcd::Identity(n, n).rowwise().reverse();
            CHECK((h * j - j * h).cwiseAbs().maxCoeff() < 1e-12);
        }
    auto broken = gauge_transform(canonical_ccam({2, 3}, 0.9), 2, 0.7);
    CHECK_FALSE(exchange_symmetry_check(broken).symmetric);
    Ccam single;
    single.dimension = 1;
    CHECK(exchange_symmetry_check(single).symmetric);
}

TEST_CASE("local caging check")
{
    auto patch = lotus_patch({LotusKind::first, 7, 3, 3, 1});
    int center = -1;
    for (int v = 0; v < patch.graph.num_vertices; ++v)
        if (patch.roles[v] == VertexRole::center) center = v;
    REQUIRE(center >= 0);
    CHECK(local_caging_check(lotus_ccam(patch, 2 * pi / 3), center));
    CHECK(local_caging_check(lotus_ccam(patch, -2 * pi / 3), center));
    CHECK_FALSE(local_caging_check(lotus_ccam(patch, pi / 2), center));

    // H^2 on the center against a dense product
    auto h = dense_matrix(lotus_ccam(patch, 2 * pi / 3));
    Eigen::MatrixXcd h2 = h * h;
    const double deg = patch.graph.degrees()[center];
    for (Eigen::Index v = 0; v < h.rows(); ++v) CHECK(std::abs(h2(v, center) - (v == center ? deg : 0.0)) < 1e-10);

    Ccam lone;
    lone.dimension = 1;
    CHECK(local_caging_check(lone, 0));
}

TEST_CASE("Krylov states on the rhombic chain")
{
    auto chain = chain_ccam({2}, 12, pi);
    auto g = chain.graph();
    auto h = dense_matrix(chain);
    for (auto method : {KrylovMethod::spectral, KrylovMethod::lanczos}) {
        KrylovOptions opt;
        opt.method = method;
        auto r = krylov_cls(chain, 18, opt);   // hub between cells 5 and 6
        CHECK_FALSE(r.cap_exceeded);
        CHECK(r.krylov_dim <= 5);
        for (const auto& s : r.states) {
            CHECK(std::min({std::abs(s.eigenvalue + 2), std::abs(s.eigenvalue), std::abs(s.eigenvalue - 2)}) < 1e-9);
            check_state(h, g, 18, s);
        }
    }
    KrylovOptions small;
    small.cap = 16;
    auto flat0 = chain_ccam({2}, 40, 0);
    for (int seed : {0, 30, 61}) CHECK(krylov_cls(flat0, seed, small).cap_exceeded);
}

TEST_CASE("dice patch states stay within two rings")
{
    auto patch = lotus_patch({LotusKind::first, 6, 2, 3, 2});
    auto m = lotus_ccam(patch, pi);
    auto h = dense_matrix(m);
    for (int v = 0; v < patch.graph.num_vertices; ++v) {
        if (patch.boundary[v] || patch.roles[v] == VertexRole::interior || patch.roles[v] == VertexRole::corner) continue;
        auto r = krylov_cls(m, v);
        CHECK_FALSE(r.cap_exceeded);
        CHECK(r.max_radius <= 2);
        auto ring = oracle::support_after(h, v, 2);
        std::set<int> allowed(ring.begin(), ring.end());
        for (const auto& s : r.states) {
            check_state(h, patch.graph, v, s);
            for (auto [w, a] : s.amplitudes) CHECK(allowed.count(w));
        }
    }
}

TEST_CASE("complete sets of compact states")
{
    auto rep = verify_all_cls(canonical_ccam({2}, pi), 2);
    CHECK(rep.covered);
    CHECK(rep.span_rank == 4);
    CHECK(rep.ok());

    const IntSeq x{2, 3, 2};
    auto chain = chain_ccam(x, 4, pi / 6);
    KrylovOptions opt;
    opt.distance = chain_cell_distance(x, 4);
    auto full = verify_all_cls(chain, 1, opt);
    CHECK(full.ok());
    CHECK(full.span_rank == chain.dimension);
    CHECK(full.max_radius <= 1);

    KrylovOptions small = opt;
    small.cap = 24;
    auto bad = verify_all_cls(chain_ccam(x, 4, 1.0), 1, small);
    CHECK_FALSE(bad.ok());
    CHECK_FALSE(bad.cap_exceeded_seeds.empty());
}

TEST_CASE("unit-cell distance on chains")
{
    const IntSeq x{2};
    auto d = chain_cell_distance(x, 4);   // roots 0, 3, 6, 9, 12
    CHECK(d(1, 2) == 0);
    CHECK(d(1, 3) == 0);
    CHECK(d(1, 4) == 1);
    CHECK(d(3, 4) == 0);
    CHECK(d(1, 12) == 3);
}
