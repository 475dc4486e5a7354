#pragma once

#include "caged/errors.hpp"
#include "caged/graphs.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <optional>
#include <vector>

namespace caged {

using cplx = std::complex<double>;

/// Reduce an angle to (-pi, pi].
double wrap_angle(double theta);

/// Distance from theta to the nearest multiple of 2 pi.
double distance_to_lattice(double theta);

struct PhaseVector {
    std::vector<cplx> entries;
    int level = 1;      // 1-based
    double flux = 0.0;
};

/// omega_j = (Phi/4)(x_j - 1) prod_{l<j} x_l
double level_omega(const IntSeq& x, int j, double phi);
PhaseVector canonical_phase_vector(const IntSeq& x, int j, double phi);
/// sum_c w_c^2, no conjugation.
cplx phase_pairing(const PhaseVector& v);
/// Exact vanishing condition for the pairing at level j: e^{i theta} != 1 and
/// e^{i x_j theta} = 1 with theta = Phi prod_{l<j} x_l.
bool pairing_vanishes(const IntSeq& x, int j, double phi, double tol = 1e-9);

struct PhaseEdge {
    int u, v;          // u < v
    double theta;      // entry (u,v) = exp(i theta)
};

struct Ccam {
    int dimension = 0;
    std::vector<PhaseEdge> entries;   // sorted by (u,v)
    std::optional<int> first_vertex, last_vertex;
    double flux = 0.0;
    std::vector<std::vector<int>> plaquettes;

    /// Phase of the oriented hop u -> v; throws if (u,v) is not an edge.
    double phase(int u, int v) const;
    Graph graph() const;
    void sort_entries();
};

Ccam canonical_ccam(const IntSeq& x, double phi);
Ccam chain_ccam(const IntSeq& x, int cells, double phi);
/// Canonical gauge inside every splice; untouched host edges carry phase 0.
Ccam replacement_ccam(const Replacement& r, double phi);
/// Lotus patch with plaquette i pierced by face_signs[i] * phi.
Ccam lotus_ccam(const LotusPatch& patch, double phi);
/// Minimum-norm phases realizing the given flux through each plaquette of g.
Ccam ccam_from_fluxes(const Graph& g, const std::vector<double>& face_flux, double flux_label);

double plaquette_flux(const Ccam& m, const std::vector<int>& loop);
/// Largest |wrap(flux(face) - expected)| over the stored plaquettes.
double max_flux_deviation(const Ccam& m, const std::vector<double>& expected);
double max_flux_deviation(const Ccam& m);

Ccam gauge_transform(const Ccam& m, int w, double gamma);

struct FlatSet {
    std::int64_t denominator = 1;
    std::vector<double> values;   // 2 pi z / M, z = 1..M
    bool contains(double phi, double tol = 1e-9) const;
};

FlatSet flat_values(const IntSeq& x);

/// True iff some level's phase pairing vanishes, i.e. every crossing amplitude
/// <L|Y^k|F> is zero. Multiples of 2 pi are never uncrossable.
bool is_uncrossable(const IntSeq& x, double phi, double tol = 1e-9);

/// Dense-solver vertex cap; CAGED_DENSE_LIMIT overrides the default 4096.
int dense_limit();

template <class Real = double>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>
dense_matrix(const Ccam& m, std::optional<int> limit = std::nullopt)
{
    const int cap = limit ? *limit : dense_limit();
    if (m.dimension > cap)
        throw ResourceLimit("dimension " + std::to_string(m.dimension) +
                            " exceeds the dense limit " + std::to_string(cap));
    using C = std::complex<Real>;
    Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> h =
        Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>::Zero(m.dimension, m.dimension);
    for (const auto& e : m.entries) {
        const Real t = static_cast<Real>(e.theta);
        h(e.u, e.v) += C(std::cos(t), std::sin(t));
        h(e.v, e.u) += C(std::cos(t), -std::sin(t));
    }
    return h;
}

Eigen::SparseMatrix<cplx> sparse_matrix(const Ccam& m);

} // namespace caged
