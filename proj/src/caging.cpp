#include "caged/caging.hpp"
#include "caged/cyclotomic.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>
#include <queue>

namespace caged {

using std::numbers::pi;

namespace {

void require_vertex(const Ccam& m, int v)
{
    if (v < 0 || v >= m.dimension) throw InvalidParameter("vertex out of range");
}

} // namespace

std::vector<cplx> crossing_amplitudes_float(const Ccam& m, int first, int last, int k_max)
{
    require_vertex(m, first);
    require_vertex(m, last);
    SparseC s = sparse_matrix(m);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(m.dimension);
    v[first] = 1;
    std::vector<cplx> out;
    for (int k = 1; k <= k_max; ++k) {
        v = s * v;
        out.push_back(v[last]);
    }
    return out;
}

std::vector<cplx> crossing_amplitudes(const Ccam& m, int first, int last, int k_max)
{
    require_vertex(m, first);
    require_vertex(m, last);
    if (k_max < 0) throw InvalidParameter("k_max must be >= 0");
    std::vector<double> thetas;
    for (const auto& e : m.entries) thetas.push_back(e.theta);
    const int n = common_root_order(thetas);
    if (n == 0) return crossing_amplitudes_float(m, first, last, k_max);

    struct Hop { int to; int shift; };
    std::vector<std::vector<Hop>> adj(m.dimension);
    for (const auto& e : m.entries) {
        int k = static_cast<int>(std::lround(e.theta * n / (2 * pi)));
        adj[e.u].push_back({e.v, k});    // (Mw)_u += zeta^k w_v
        adj[e.v].push_back({e.u, -k});
    }
    std::size_t max_deg = 1;
    for (const auto& a : adj) max_deg = std::max(max_deg, a.size());

    const std::size_t dim = m.dimension, stride = n;
    std::vector<std::int64_t> v(dim * stride, 0), w(dim * stride);
    v[first * stride] = 1;
    std::vector<cplx> out;
    long double bound = 1;
    for (int k = 1; k <= k_max; ++k) {
        bound *= static_cast<long double>(max_deg);
        if (bound > 4e18L) {   // coefficients could overflow; finish in floating point
            auto rest = crossing_amplitudes_float(m, first, last, k_max);
            out.insert(out.end(), rest.begin() + (k - 1), rest.end());
            return out;
        }
        std::fill(w.begin(), w.end(), 0);
        for (std::size_t u = 0; u < dim; ++u) {
            std::int64_t* dst = &w[u * stride];
            for (const auto& h : adj[u]) {
                const std::int64_t* src = &v[h.to * stride];
                const int sh = ((h.shift % n) + n) % n;
                for (int j = 0; j < n - sh; ++j) dst[j + sh] += src[j];
                for (int j = n - sh; j < n; ++j) dst[j + sh - n] += src[j];
            }
        }
        std::swap(v, w);
        CyclotomicInt at(n);
        for (int j = 0; j < n; ++j) at[j] = v[last * stride + j];
        out.push_back(at.value());
    }
    return out;
}

std::vector<cplx> crossing_amplitudes(const Ccam& m, int k_max)
{
    if (!m.first_vertex || !m.last_vertex)
        throw InvalidParameter("crossing amplitudes need marked roots or explicit vertices");
    return crossing_amplitudes(m, *m.first_vertex, *m.last_vertex, k_max);
}

double RecurrenceState::identity_residual() const
{
    cplx lhs = delta * delta_prev, rhs = phi * phi - chi * chi;
    double scale = std::max({std::abs(lhs), std::abs(phi * phi), std::abs(chi * chi), 1e-300});
    return std::abs(lhs - rhs) / scale;
}

namespace {

// sum_c exp(2 i alpha_c) = exp(2 i omega) sum_{c<x} exp(-i c theta), evaluated so
// that the vanishing case is exactly zero.
cplx pairing_closed_form(const IntSeq& x, int j, double phi)
{
    const int xj = x[j - 1];
    if (xj == 1) return 1.0;
    double theta = phi;
    for (int l = 0; l + 1 < j; ++l) theta *= x[l];
    const cplx lead = std::polar(1.0, 2 * level_omega(x, j, phi));
    if (distance_to_lattice(theta) < 1e-12) return lead * double(xj);
    if (pairing_vanishes(x, j, phi)) return 0.0;
    return lead * (1.0 - std::polar(1.0, -xj * theta)) / (1.0 - std::polar(1.0, -theta));
}

} // namespace

std::vector<RecurrenceState> resolvent_recurrence(const IntSeq& x, double phi, cplx lambda)
{
    if (lambda.imag() == 0.0) throw InvalidParameter("resolvent recurrence needs Im(lambda) != 0");
    cplx delta = -lambda, ph = 1.0, chi = 1.0;
    std::vector<RecurrenceState> out;
    for (int i = 1; i <= x.depth(); ++i) {
        cplx nph = -lambda * delta - double(x[i - 1]) * ph;
        cplx nchi = pairing_closed_form(x, i, phi) * chi;
        cplx ndelta = (nph * nph - nchi * nchi) / delta;
        out.push_back({i, ndelta, nph, nchi, delta});
        delta = ndelta;
        ph = nph;
        chi = nchi;
    }
    return out;
}

ExchangeCheck exchange_symmetry_check(const Ccam& m, double tol)
{
    const int n = m.dimension;
    double worst = 0;
    for (const auto& e : m.entries) {
        const cplx z = std::polar(1.0, e.theta);
        const int a = n - 1 - e.u, b = n - 1 - e.v;
        cplx mirror = 0;
        try {
            mirror = std::polar(1.0, m.phase(a, b));
        } catch (const InvalidParameter&) {
        }
        worst = std::max(worst, std::abs(z - mirror));
    }
    return {worst < tol, worst};
}

SpectralCache make_spectral_cache(const SparseC& m, double cluster_tol)
{
    if (m.rows() > dense_limit())
        throw ResourceLimit("spectral Krylov path exceeds the dense limit");
    SpectralCache c;
    c.eig = hermitian_eigensolve(Eigen::MatrixXcd(m));
    const int n = static_cast<int>(c.eig.values.size());
    for (int a = 0; a < n;) {
        int b = a + 1;
        while (b < n && c.eig.values[b] - c.eig.values[b - 1] <= cluster_tol) ++b;
        c.clusters.push_back({a, b});
        a = b;
    }
    return c;
}

namespace {

std::vector<int> pattern_distances(const SparseC& m, int seed)
{
    std::vector<int> dist(m.rows(), -1);
    std::queue<int> q;
    dist[seed] = 0;
    q.push(seed);
    while (!q.empty()) {
        int a = q.front();
        q.pop();
        for (SparseC::InnerIterator it(m, a); it; ++it) {
            int b = static_cast<int>(it.row());
            if (b != a && dist[b] < 0 && std::abs(it.value()) > 0) {
                dist[b] = dist[a] + 1;
                q.push(b);
            }
        }
    }
    return dist;
}

void finish_state(const SparseC& m, int seed, const Eigen::VectorXcd& psi, double lambda,
                  const KrylovOptions& opt, const std::vector<int>& dist, KrylovResult& r)
{
    ClsState st;
    st.eigenvalue = lambda;
    st.residual = (m * psi - lambda * psi).norm();
    for (int v = 0; v < psi.size(); ++v) {
        if (std::abs(psi[v]) > 1e-14) st.amplitudes.push_back({v, psi[v]});
        if (std::abs(psi[v]) > opt.support_tol) {
            int d = opt.distance ? opt.distance(seed, v) : dist[v];
            if (d < 0) d = std::numeric_limits<int>::max();
            st.support_radius = std::max(st.support_radius, d);
        }
    }
    r.max_residual = std::max(r.max_residual, st.residual);
    r.max_radius = std::max(r.max_radius, st.support_radius);
    r.states.push_back(std::move(st));
}

KrylovResult lanczos(const SparseC& m, int seed, const KrylovOptions& opt, const std::vector<int>& dist)
{
    KrylovResult r;
    r.seed = seed;
    const auto n = m.rows();
    std::vector<Eigen::VectorXcd> q;
    q.push_back(Eigen::VectorXcd::Unit(n, seed));
    for (;;) {
        Eigen::VectorXcd w = m * q.back();
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : q) w -= b.dot(w) * b;
        const double beta = w.norm();
        if (beta < opt.closure_tol) break;
        if (static_cast<int>(q.size()) >= opt.cap || static_cast<Eigen::Index>(q.size()) >= n) {
            r.cap_exceeded = static_cast<int>(q.size()) >= opt.cap;
            if (r.cap_exceeded) {
                r.krylov_dim = static_cast<int>(q.size());
                return r;
            }
            break;
        }
        q.push_back(w / beta);
    }
    const int k = static_cast<int>(q.size());
    Eigen::MatrixXcd qm(n, k);
    for (int i = 0; i < k; ++i) qm.col(i) = q[i];
    Eigen::MatrixXcd t = qm.adjoint() * (m * qm);
    t = (t + t.adjoint()).eval() / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t);
    r.krylov_dim = k;
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXcd psi = qm * es.eigenvectors().col(i);
        psi.normalize();
        finish_state(m, seed, psi, es.eigenvalues()[i], opt, dist, r);
    }
    return r;
}

KrylovResult spectral(const SparseC& m, int seed, const KrylovOptions& opt,
                      const SpectralCache& c, const std::vector<int>& dist)
{
    KrylovResult r;
    r.seed = seed;
    const auto& v = c.eig.vectors;
    std::vector<std::pair<Eigen::VectorXcd, double>> found;
    for (auto [a, b] : c.clusters) {
        Eigen::VectorXcd coef = v.block(seed, a, 1, b - a).adjoint();
        const double norm = coef.norm();
        if (norm <= opt.closure_tol) continue;
        Eigen::VectorXcd psi = v.middleCols(a, b - a) * coef / norm;
        found.push_back({std::move(psi), c.eig.values.segment(a, b - a).mean()});
        if (static_cast<int>(found.size()) > opt.cap) {
            r.cap_exceeded = true;
            r.krylov_dim = static_cast<int>(found.size());
            return r;
        }
    }
    r.krylov_dim = static_cast<int>(found.size());
    for (auto& [psi, lambda] : found) finish_state(m, seed, psi, lambda, opt, dist, r);
    return r;
}

bool use_spectral(const SparseC& m, const KrylovOptions& opt)
{
    switch (opt.method) {
    case KrylovMethod::lanczos: return false;
    case KrylovMethod::spectral: return true;
    default: return m.rows() <= dense_limit();
    }
}

} // namespace

KrylovResult krylov_cls(const SparseC& m, int seed, const KrylovOptions& opt, const SpectralCache* cache)
{
    if (seed < 0 || seed >= m.rows()) throw InvalidParameter("seed vertex out of range");
    auto dist = opt.distance ? std::vector<int>{} : pattern_distances(m, seed);
    if (!use_spectral(m, opt)) return lanczos(m, seed, opt, dist);
    if (cache) return spectral(m, seed, opt, *cache, dist);
    auto own = make_spectral_cache(m, opt.cluster_tol);
    return spectral(m, seed, opt, own, dist);
}

KrylovResult krylov_cls(const Ccam& m, int seed, const KrylovOptions& opt)
{
    return krylov_cls(sparse_matrix(m), seed, opt);
}

double local_caging_residual(const SparseC& m, int v)
{
    if (v < 0 || v >= m.rows()) throw InvalidParameter("vertex out of range");
    Eigen::VectorXcd e = Eigen::VectorXcd::Unit(m.rows(), v);
    Eigen::VectorXcd h = m * e;
    int deg = 0;
    for (Eigen::Index i = 0; i < h.size(); ++i)
        if (i != v && std::abs(h[i]) > 0) ++deg;
    Eigen::VectorXcd h2 = m * h - double(deg) * e;
    return h2.norm();
}

bool local_caging_check(const SparseC& m, int v, double tol)
{
    return local_caging_residual(m, v) < tol;
}

bool local_caging_check(const Ccam& m, int v, double tol)
{
    return local_caging_check(sparse_matrix(m), v, tol);
}

ClsReport verify_all_cls(const SparseC& m, int radius_bound, const KrylovOptions& opt)
{
    if (m.rows() > dense_limit()) throw ResourceLimit("verify_all_cls exceeds the dense limit");
    ClsReport rep;
    rep.dimension = static_cast<int>(m.rows());
    std::optional<SpectralCache> cache;
    if (use_spectral(m, opt)) cache = make_spectral_cache(m, opt.cluster_tol);

    std::vector<Eigen::VectorXcd> cols;
    for (int s = 0; s < rep.dimension; ++s) {
        auto r = krylov_cls(m, s, opt, cache ? &*cache : nullptr);
        if (r.cap_exceeded) rep.cap_exceeded_seeds.push_back(s);
        if (r.max_radius > radius_bound) rep.radius_violations.push_back(s);
        rep.max_residual = std::max(rep.max_residual, r.max_residual);
        rep.max_radius = std::max(rep.max_radius, r.max_radius);
        for (const auto& st : r.states) {
            Eigen::VectorXcd c = Eigen::VectorXcd::Zero(rep.dimension);
            for (auto [v, a] : st.amplitudes) c[v] = a;
            cols.push_back(std::move(c));
        }
        rep.seeds.push_back(std::move(r));
    }
    if (!cols.empty()) {
        Eigen::MatrixXcd a(cols.size(), rep.dimension);
        for (std::size_t i = 0; i < cols.size(); ++i) a.row(i) = cols[i].adjoint();
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
        qr.setThreshold(1e-8);
        rep.span_rank = static_cast<int>(qr.rank());
    }
    rep.covered = rep.span_rank == rep.dimension;
    return rep;
}

ClsReport verify_all_cls(const Ccam& m, int radius_bound, const KrylovOptions& opt)
{
    return verify_all_cls(sparse_matrix(m), radius_bound, opt);
}

std::function<int(int, int)> chain_cell_distance(const IntSeq& x, int cells)
{
    int n = 1;
    for (int v : x.entries()) n = v * n + 2;
    const int s = n - 1;
    auto cell_range = [s, cells](int v) {
        int c = v / s;
        if (v % s) return std::pair{c, c};
        return std::pair{std::max(c - 1, 0), std::min(c, cells - 1)};
    };
    return [cell_range](int a, int b) {
        auto [a0, a1] = cell_range(a);
        auto [b0, b1] = cell_range(b);
        if (a1 < b0) return b0 - a1;
        if (b1 < a0) return a0 - b1;
        return 0;
    };
}

} // namespace caged
