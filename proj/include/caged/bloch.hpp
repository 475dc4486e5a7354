#pragma once

#include "caged/gauge.hpp"

#include <array>
#include <functional>

namespace caged {

using Momentum = Eigen::Vector2d;   // (k, unused) in one dimension

struct BlochModel {
    int bands = 0;
    int dimensionality = 1;
    std::function<Eigen::MatrixXcd(const Momentum&, double phi)> builder;

    Eigen::MatrixXcd operator()(double k, double phi) const { return builder(Momentum(k, 0), phi); }
    Eigen::MatrixXcd operator()(double kx, double ky, double phi) const
    {
        return builder(Momentum(kx, ky), phi);
    }
};

/// Bloch Hamiltonian of the chain of trees grown by x. The two roots of a cell
/// merge into row 0; the wrap hops carry e^{+-ik}. Momentum is measured so that
/// a crossing along the rightmost boundary path carries phase k alone, which
/// makes x = {2} coincide with the rhombic closed form pointwise in k.
BlochModel chain_bloch(const IntSeq& x);

/// -E, 0, E with E = sqrt(2) sqrt(2 + cos k + cos(k - Phi)).
std::array<double, 3> rhombic_bands(double phi, double k);

/// Six-band model of the {4,4} lotus lattice of the second kind.
/// Each square face carries omega twice, so omega = e^{i Phi/2} puts flux Phi through it.
BlochModel second_kind_44_bloch();

/// Same matrix evaluated at a raw omega.
Eigen::MatrixXcd second_kind_44_matrix(const Momentum& k, cplx omega);

struct BandSweep {
    std::vector<Momentum> momenta;
    std::vector<Eigen::VectorXd> energies;   // ascending per momentum
    double total_bandwidth = 0;
    /// Widest gap between consecutive energies of the union over momenta.
    double largest_gap() const;
};

/// Uniform grid on [0, 2pi) per momentum component.
BandSweep band_sweep(const BlochModel& model, double phi, int grid);

struct EnergyBins {
    double lo, hi;
    int count;
    double width() const { return (hi - lo) / count; }
    double center(int i) const { return lo + (i + 0.5) * width(); }
};

struct DosMap {
    std::vector<double> phis;
    EnergyBins bins{0, 1, 1};
    std::vector<std::vector<std::int64_t>> counts;   // [phi][bin]
};

DosMap dos_map(const BlochModel& model, const std::vector<double>& phis, int k_grid, const EnergyBins& bins);

/// max over lambda samples and momentum pairs of |C(F(k1); lambda) - C(F(k2); lambda)|.
double charpoly_k_independence(const IntSeq& x, double phi, const std::vector<double>& lambdas,
                               int k_samples = 16);

} // namespace caged
