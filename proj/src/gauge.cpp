#include "caged/gauge.hpp"
#include "growth.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace caged {

using std::numbers::pi;

double wrap_angle(double theta)
{
    double r = std::remainder(theta, 2 * pi);   // [-pi, pi]
    if (r <= -pi) r += 2 * pi;
    return r;
}

double distance_to_lattice(double theta)
{
    return std::abs(std::remainder(theta, 2 * pi));
}

double level_omega(const IntSeq& x, int j, double phi)
{
    if (j < 1 || j > x.depth()) throw InvalidParameter("level out of range");
    double prod = 1;
    for (int l = 0; l + 1 < j; ++l) prod *= x[l];
    return phi / 4 * (x[j - 1] - 1) * prod;
}

namespace {

double alpha(int xj, int c, double omega)   // c is 1-based
{
    if (xj == 1) return 0.0;
    return (1.0 - 2.0 * (c - 1) / (xj - 1)) * omega;
}

} // namespace

PhaseVector canonical_phase_vector(const IntSeq& x, int j, double phi)
{
    const double om = level_omega(x, j, phi);
    PhaseVector v;
    v.level = j;
    v.flux = phi;
    const int xj = x[j - 1];
    for (int c = 1; c <= xj; ++c) v.entries.push_back(std::polar(1.0, alpha(xj, c, om)));
    return v;
}

cplx phase_pairing(const PhaseVector& v)
{
    cplx s = 0;
    for (auto w : v.entries) s += w * w;
    return s;
}

bool pairing_vanishes(const IntSeq& x, int j, double phi, double tol)
{
    if (j < 1 || j > x.depth()) throw InvalidParameter("level out of range");
    double theta = phi;
    for (int l = 0; l + 1 < j; ++l) theta *= x[l];
    return distance_to_lattice(theta) > tol && distance_to_lattice(x[j - 1] * theta) < tol;
}

double Ccam::phase(int u, int v) const
{
    const int a = std::min(u, v), b = std::max(u, v);
    auto it = std::lower_bound(entries.begin(), entries.end(), std::pair{a, b},
                               [](const PhaseEdge& e, const std::pair<int, int>& key) {
                                   return std::pair{e.u, e.v} < key;
                               });
    if (it == entries.end() || it->u != a || it->v != b)
        throw InvalidParameter("(" + std::to_string(u) + "," + std::to_string(v) + ") is not an edge");
    return u < v ? it->theta : -it->theta;
}

Graph Ccam::graph() const
{
    Graph g;
    g.num_vertices = dimension;
    for (const auto& e : entries) g.edges.push_back({e.u, e.v});
    g.plaquettes = plaquettes;
    g.first_vertex = first_vertex;
    g.last_vertex = last_vertex;
    return g;
}

void Ccam::sort_entries()
{
    std::sort(entries.begin(), entries.end(), [](const PhaseEdge& a, const PhaseEdge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
}

namespace {

// Phases of the canonical gauge, in growth edge order.
std::vector<double> canonical_phases(const IntSeq& x, const detail::Growth& gr, double phi)
{
    std::vector<double> om(x.depth());
    for (int j = 1; j <= x.depth(); ++j) om[j - 1] = level_omega(x, j, phi);
    std::vector<double> th;
    th.reserve(gr.edges.size());
    for (const auto& e : gr.edges) th.push_back(alpha(x[e.level - 1], e.copy, om[e.level - 1]));
    return th;
}

void push_edge(Ccam& m, int u, int v, double theta)
{
    if (u < v)
        m.entries.push_back({u, v, theta});
    else
        m.entries.push_back({v, u, -theta});
}

} // namespace

Ccam canonical_ccam(const IntSeq& x, double phi)
{
    return chain_ccam(x, 1, phi);
}

Ccam chain_ccam(const IntSeq& x, int cells, double phi)
{
    if (cells < 1) throw InvalidParameter("chain needs at least one cell");
    auto gr = detail::grow(x);
    auto th = canonical_phases(x, gr, phi);
    const int s = gr.n - 1;
    Ccam m;
    m.dimension = cells * s + 1;
    m.flux = phi;
    for (int c = 0; c < cells; ++c) {
        const int off = c * s;
        for (std::size_t i = 0; i < gr.edges.size(); ++i)
            push_edge(m, gr.edges[i].u + off, gr.edges[i].v + off, th[i]);
        for (const auto& f : gr.faces) {
            auto& nf = m.plaquettes.emplace_back(f);
            for (auto& w : nf) w += off;
        }
    }
    m.sort_entries();
    m.first_vertex = 0;
    m.last_vertex = m.dimension - 1;
    return m;
}

Ccam replacement_ccam(const Replacement& r, double phi)
{
    const Graph& g = r.graph;
    std::map<Edge, double> phase;
    for (auto e : g.edges) phase[e] = 0.0;
    for (const auto& sp : r.splices) {
        auto gr = detail::grow(sp.x);
        auto th = canonical_phases(sp.x, gr, phi);
        for (std::size_t i = 0; i < gr.edges.size(); ++i) {
            int u = sp.vertex_map[gr.edges[i].u], v = sp.vertex_map[gr.edges[i].v];
            phase[make_edge(u, v)] = u < v ? th[i] : -th[i];
        }
    }
    Ccam m;
    m.dimension = g.num_vertices;
    m.flux = phi;
    for (const auto& [e, t] : phase) m.entries.push_back({e.first, e.second, t});
    m.plaquettes = g.plaquettes;
    m.first_vertex = g.first_vertex;
    m.last_vertex = g.last_vertex;
    return m;
}

Ccam ccam_from_fluxes(const Graph& g, const std::vector<double>& face_flux, double flux_label)
{
    const int nf = static_cast<int>(g.plaquettes.size());
    if (static_cast<int>(face_flux.size()) != nf)
        throw InvalidParameter("one flux value per plaquette required");
    const int ne = static_cast<int>(g.edges.size());

    std::vector<Eigen::Triplet<double>> trip;
    for (int f = 0; f < nf; ++f) {
        const auto& loop = g.plaquettes[f];
        for (std::size_t i = 0; i < loop.size(); ++i) {
            int a = loop[i], b = loop[(i + 1) % loop.size()];
            auto e = make_edge(a, b);
            auto it = std::lower_bound(g.edges.begin(), g.edges.end(), e);
            if (it == g.edges.end() || *it != e) throw InvalidParameter("plaquette uses a non-edge");
            trip.emplace_back(f, static_cast<int>(it - g.edges.begin()), a < b ? 1.0 : -1.0);
        }
    }
    Eigen::SparseMatrix<double> b(nf, ne);
    b.setFromTriplets(trip.begin(), trip.end());

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(ne);
    if (nf > 0) {
        Eigen::SparseMatrix<double> bbt = b * b.transpose();
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(bbt);
        if (ldlt.info() != Eigen::Success) throw InvalidParameter("plaquettes are not independent");
        Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(face_flux.data(), nf);
        Eigen::VectorXd y = ldlt.solve(rhs);
        theta = b.transpose() * y;
        if ((b * theta - rhs).norm() > 1e-9 * (1 + rhs.norm()))
            throw InvalidParameter("plaquette fluxes cannot be realized");
    }

    Ccam m;
    m.dimension = g.num_vertices;
    m.flux = flux_label;
    for (int i = 0; i < ne; ++i) m.entries.push_back({g.edges[i].first, g.edges[i].second, theta[i]});
    m.plaquettes = g.plaquettes;
    m.first_vertex = g.first_vertex;
    m.last_vertex = g.last_vertex;
    return m;
}

Ccam lotus_ccam(const LotusPatch& patch, double phi)
{
    std::vector<double> f;
    for (int s : patch.face_signs) f.push_back(s * phi);
    return ccam_from_fluxes(patch.graph, f, phi);
}

double plaquette_flux(const Ccam& m, const std::vector<int>& loop)
{
    double s = 0;
    for (std::size_t i = 0; i < loop.size(); ++i) s += m.phase(loop[i], loop[(i + 1) % loop.size()]);
    return wrap_angle(s);
}

double max_flux_deviation(const Ccam& m, const std::vector<double>& expected)
{
    double worst = 0;
    for (std::size_t i = 0; i < m.plaquettes.size(); ++i)
        worst = std::max(worst, std::abs(wrap_angle(plaquette_flux(m, m.plaquettes[i]) - expected[i])));
    return worst;
}

double max_flux_deviation(const Ccam& m)
{
    return max_flux_deviation(m, std::vector<double>(m.plaquettes.size(), m.flux));
}

Ccam gauge_transform(const Ccam& m, int w, double gamma)
{
    if (w < 0 || w >= m.dimension) throw InvalidParameter("gauge vertex out of range");
    Ccam r = m;
    for (auto& e : r.entries) {
        if (e.v == w) e.theta += gamma;
        if (e.u == w) e.theta -= gamma;
    }
    return r;
}

bool FlatSet::contains(double phi, double tol) const
{
    const double z = phi * static_cast<double>(denominator) / (2 * pi);
    return std::abs(z - std::round(z)) * 2 * pi / static_cast<double>(denominator) < tol;
}

FlatSet flat_values(const IntSeq& x)
{
    FlatSet f;
    f.denominator = x.product();
    for (std::int64_t z = 1; z <= f.denominator; ++z)
        f.values.push_back(2 * pi * static_cast<double>(z) / static_cast<double>(f.denominator));
    return f;
}

bool is_uncrossable(const IntSeq& x, double phi, double tol)
{
    for (int j = 1; j <= x.depth(); ++j)
        if (pairing_vanishes(x, j, phi, tol)) return true;
    return false;
}

int dense_limit()
{
    if (const char* env = std::getenv("CAGED_DENSE_LIMIT")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
        throw InvalidParameter("CAGED_DENSE_LIMIT must be a positive integer");
    }
    return 4096;
}

Eigen::SparseMatrix<cplx> sparse_matrix(const Ccam& m)
{
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(2 * m.entries.size());
    for (const auto& e : m.entries) {
        trip.emplace_back(e.u, e.v, std::polar(1.0, e.theta));
        trip.emplace_back(e.v, e.u, std::polar(1.0, -e.theta));
    }
    Eigen::SparseMatrix<cplx> s(m.dimension, m.dimension);
    s.setFromTriplets(trip.begin(), trip.end());
    return s;
}

} // namespace caged
