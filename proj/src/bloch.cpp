#include "caged/bloch.hpp"
#include "growth.hpp"

#include <Eigen/LU>

#include <cmath>
#include <memory>
#include <numbers>

namespace caged {

using std::numbers::pi;

BlochModel chain_bloch(const IntSeq& x)
{
    auto gr = std::make_shared<detail::Growth>(detail::grow(x));
    const int n = gr->n, last = n - 1;
    BlochModel model;
    model.bands = n - 1;
    model.dimensionality = 1;
    model.builder = [gr, x, n, last](const Momentum& mom, double phi) {
        std::vector<double> om(x.depth());
        double twice_sum = 0;
        for (int j = 1; j <= x.depth(); ++j) {
            om[j - 1] = level_omega(x, j, phi);
            twice_sum += 2 * om[j - 1];
        }
        const double k = mom[0] - twice_sum;
        Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(n - 1, n - 1);
        for (const auto& e : gr->edges) {
            const int xj = x[e.level - 1];
            const double a = xj == 1 ? 0.0 : (1.0 - 2.0 * (e.copy - 1) / (xj - 1)) * om[e.level - 1];
            cplx z = std::polar(1.0, a);   // entry (u, v)
            int u = e.u, v = e.v;
            if (v == last) {
                v = 0;
                z *= std::polar(1.0, -k);
            }
            f(u, v) += z;
            f(v, u) += std::conj(z);
        }
        return f;
    };
    return model;
}

std::array<double, 3> rhombic_bands(double phi, double k)
{
    const double e = std::sqrt(2.0) * std::sqrt(std::max(0.0, 2 + std::cos(k) + std::cos(k - phi)));
    return {-e, 0.0, e};
}

Eigen::MatrixXcd second_kind_44_matrix(const Momentum& mom, cplx w)
{
    const cplx wc = std::conj(w);
    const cplx ex = std::polar(1.0, -mom[0]), ey = std::polar(1.0, -mom[1]);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(6, 6);
    h(0, 1) = ex + w;
    h(0, 3) = ex * ey + wc * ex;
    h(0, 4) = 1.0 + ey * wc;
    h(0, 5) = ey + ex * ey * w;
    h(1, 2) = w;
    h(2, 3) = 1.0;
    h(2, 4) = 1.0;
    h(2, 5) = wc;
    Eigen::MatrixXcd upper = h;
    h += upper.adjoint();
    return h;
}

BlochModel second_kind_44_bloch()
{
    BlochModel model;
    model.bands = 6;
    model.dimensionality = 2;
    model.builder = [](const Momentum& mom, double phi) {
        return second_kind_44_matrix(mom, std::polar(1.0, phi / 2));
    };
    return model;
}

double BandSweep::largest_gap() const
{
    std::vector<double> all;
    for (const auto& e : energies) all.insert(all.end(), e.begin(), e.end());
    std::sort(all.begin(), all.end());
    double gap = 0;
    for (std::size_t i = 1; i < all.size(); ++i) gap = std::max(gap, all[i] - all[i - 1]);
    return gap;
}

namespace {

std::vector<Momentum> momentum_grid(int dimensionality, int grid)
{
    if (grid < 2) throw InvalidParameter("momentum grid needs at least 2 points");
    std::vector<Momentum> ks;
    for (int i = 0; i < grid; ++i) {
        const double kx = 2 * pi * i / grid;
        if (dimensionality == 1) {
            ks.emplace_back(kx, 0.0);
            continue;
        }
        for (int j = 0; j < grid; ++j) ks.emplace_back(kx, 2 * pi * j / grid);
    }
    return ks;
}

Eigen::VectorXd eigenvalues(const Eigen::MatrixXcd& h)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

} // namespace

BandSweep band_sweep(const BlochModel& model, double phi, int grid)
{
    BandSweep s;
    s.momenta = momentum_grid(model.dimensionality, grid);
    for (const auto& k : s.momenta) s.energies.push_back(eigenvalues(model.builder(k, phi)));
    for (int b = 0; b < model.bands; ++b) {
        double lo = s.energies[0][b], hi = lo;
        for (const auto& e : s.energies) {
            lo = std::min(lo, e[b]);
            hi = std::max(hi, e[b]);
        }
        s.total_bandwidth = std::max(s.total_bandwidth, hi - lo);
    }
    return s;
}

DosMap dos_map(const BlochModel& model, const std::vector<double>& phis, int k_grid, const EnergyBins& bins)
{
    if (phis.empty() || bins.count < 1 || !(bins.hi > bins.lo))
        throw InvalidParameter("dos map needs flux values and a nonempty energy range");
    DosMap d;
    d.phis = phis;
    d.bins = bins;
    for (double phi : phis) {
        std::vector<std::int64_t> row(bins.count, 0);
        for (const auto& e : band_sweep(model, phi, k_grid).energies)
            for (double v : e) {
                if (v < bins.lo || v > bins.hi) continue;
                int i = std::min(static_cast<int>((v - bins.lo) / bins.width()), bins.count - 1);
                ++row[i];
            }
        d.counts.push_back(std::move(row));
    }
    return d;
}

double charpoly_k_independence(const IntSeq& x, double phi, const std::vector<double>& lambdas, int k_samples)
{
    if (lambdas.empty()) throw InvalidParameter("need at least one lambda sample");
    if (k_samples < 2) throw InvalidParameter("need at least two momentum samples");
    auto model = chain_bloch(x);
    std::vector<Eigen::MatrixXcd> fs;
    for (int i = 0; i < k_samples; ++i) fs.push_back(model(2 * pi * (i + 0.3) / k_samples, phi));
    double worst = 0;
    for (double lam : lambdas) {
        std::vector<cplx> c;
        for (const auto& f : fs) {
            Eigen::MatrixXcd a = f - lam * Eigen::MatrixXcd::Identity(f.rows(), f.cols());
            c.push_back(a.partialPivLu().determinant());
        }
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = i + 1; j < c.size(); ++j) worst = std::max(worst, std::abs(c[i] - c[j]));
    }
    return worst;
}

} // namespace caged
