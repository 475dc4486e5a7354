#include "caged/spectral.hpp"

#include <Eigen/SparseCore>

#include <numbers>

namespace caged {

Spectrum Spectrum::from_values(std::vector<double> values, double tol)
{
    std::vector<Level> w;
    w.reserve(values.size());
    for (double v : values) w.push_back({v, 1});
    return from_weighted(std::move(w), tol);
}

Spectrum Spectrum::from_weighted(std::vector<Level> values, double tol)
{
    std::sort(values.begin(), values.end(), [](const Level& a, const Level& b) { return a.value < b.value; });
    Spectrum s;
    double prev = 0, sum = 0;
    for (const auto& l : values) {
        if (l.multiplicity <= 0) continue;
        if (!s.levels.empty() && l.value - prev <= tol) {
            auto& back = s.levels.back();
            sum += l.value * static_cast<double>(l.multiplicity);
            back.multiplicity += l.multiplicity;
            back.value = sum / static_cast<double>(back.multiplicity);
        } else {
            s.levels.push_back(l);
            sum = l.value * static_cast<double>(l.multiplicity);
        }
        prev = l.value;
    }
    return s;
}

std::int64_t Spectrum::size() const
{
    std::int64_t n = 0;
    for (const auto& l : levels) n += l.multiplicity;
    return n;
}

std::vector<double> Spectrum::expanded() const
{
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(size()));
    for (const auto& l : levels) v.insert(v.end(), static_cast<std::size_t>(l.multiplicity), l.value);
    return v;
}

EigenDecomposition hermitian_eigensolve(const Eigen::MatrixXcd& m, double hermitian_tol)
{
    if (m.rows() != m.cols()) throw InvalidParameter("matrix is not square");
    if (m.size() && (m - m.adjoint()).cwiseAbs().maxCoeff() > hermitian_tol)
        throw InvalidParameter("matrix is not Hermitian");
    EigenDecomposition d;
    if (m.rows() == 0) return d;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success) throw InvalidParameter("eigensolver did not converge");
    d.values = es.eigenvalues();
    d.vectors = es.eigenvectors();
    d.spectrum = Spectrum::from_values({d.values.begin(), d.values.end()});
    return d;
}

Tridiag<double> fluxless_block(const IntSeq& x, int i)
{
    std::vector<double> off;
    for (int j = i; j >= 1; --j) off.push_back(std::sqrt(double(x[j - 1])));
    for (int j = 1; j <= i; ++j) off.push_back(std::sqrt(double(x[j - 1])));
    return hollow_tridiag(off);
}

Tridiag<double> flux_af_block(const IntSeq& x, int i)
{
    std::vector<double> off;
    for (int j = 1; j <= i; ++j) off.push_back(std::sqrt(double(x[j - 1])));
    return hollow_tridiag(off);
}

namespace {

void require_all_two(const IntSeq& x)
{
    if (!x.all_at_least_two())
        throw UnsupportedHypothesis("theorem path needs every x_i >= 2; use the dense oracle");
}

void add_block(std::vector<Level>& out, const Tridiag<double>& t, std::int64_t copies)
{
    if (copies <= 0) return;
    auto ev = tridiagonal_eigenvalues(t);
    for (double v : ev) out.push_back({v, copies});
}

} // namespace

Spectrum spectrum_fluxless(const IntSeq& x)
{
    require_all_two(x);
    const int d = x.depth();
    std::vector<std::int64_t> prod(d + 1, 1);   // prod[i] = x_1 ... x_i
    for (int i = 1; i <= d; ++i) prod[i] = prod[i - 1] * x[i - 1];
    std::vector<Level> out;
    add_block(out, fluxless_block(x, d), 1);
    for (int i = 0; i < d; ++i) add_block(out, fluxless_block(x, i), (x[i] - 1) * prod[d] / prod[i + 1]);
    return Spectrum::from_weighted(std::move(out));
}

Spectrum spectrum_flux_af(const IntSeq& x)
{
    require_all_two(x);
    const int d = x.depth();
    std::vector<std::int64_t> tail(d + 1, 1);   // tail[i] = x_2 ... x_i
    for (int i = 2; i <= d; ++i) tail[i] = tail[i - 1] * x[i - 1];
    std::vector<Level> out;
    add_block(out, flux_af_block(x, d), 2);
    for (int i = 2; i <= d; ++i) add_block(out, flux_af_block(x, i - 1), 2 * (x[i - 1] - 1) * tail[d] / tail[i]);
    add_block(out, flux_af_block(x, 0), (x[0] - 2) * tail[d]);
    return Spectrum::from_weighted(std::move(out));
}

std::vector<double> pnary_closed_form(int p, int n)
{
    if (p < 2 || n < 1) throw InvalidParameter("closed form needs p >= 2 and n >= 1");
    std::vector<double> v;
    for (int k = n; k >= 1; --k) v.push_back(2 * std::sqrt(double(p)) * std::cos(std::numbers::pi * k / (n + 1)));
    return v;
}

ShellReduction distance_shell_reduction(const IntSeq& x, double phi)
{
    if (phi != 0.0) throw UnsupportedHypothesis("distance-shell reduction only holds at zero flux");
    require_all_two(x);
    Graph g = grow_tree(x);
    const int n = g.num_vertices, d = x.depth(), shells = 2 * d + 1;
    auto dist = g.distances_from(*g.first_vertex);

    ShellReduction r;
    r.shell_sizes.assign(shells, 0);
    for (int v = 0; v < n; ++v) {
        if (dist[v] < 0 || dist[v] >= shells) throw InvalidParameter("unexpected shell structure");
        ++r.shell_sizes[dist[v]];
    }
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, shells);
    for (int v = 0; v < n; ++v) basis(v, dist[v]) = 1.0 / std::sqrt(double(r.shell_sizes[dist[v]]));

    std::vector<Eigen::Triplet<double>> trip;
    for (auto [u, v] : g.edges) {
        trip.emplace_back(u, v, 1.0);
        trip.emplace_back(v, u, 1.0);
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trip.begin(), trip.end());

    Eigen::MatrixXd ab = a * basis;
    Eigen::MatrixXd t = basis.transpose() * ab;
    r.closure_residual = (ab - basis * t).cwiseAbs().maxCoeff();
    if (r.closure_residual > 1e-9) throw InvalidParameter("shell space is not closed under adjacency");
    r.tridiag.diagonal = t.diagonal();
    r.tridiag.offdiagonal.resize(shells - 1);
    for (int i = 0; i + 1 < shells; ++i) r.tridiag.offdiagonal[i] = t(i, i + 1);
    return r;
}

} // namespace caged
