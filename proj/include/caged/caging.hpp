#pragma once

#include "caged/gauge.hpp"
#include "caged/spectral.hpp"

#include <functional>
#include <optional>

namespace caged {

using SparseC = Eigen::SparseMatrix<cplx>;

/// <l|M^k|f> for k = 1..k_max. Exact (cyclotomic integers) when every phase is
/// a rational multiple of 2 pi with denominator <= 4096, repeated sparse
/// matrix-vector products otherwise.
std::vector<cplx> crossing_amplitudes(const Ccam& m, int k_max);
std::vector<cplx> crossing_amplitudes(const Ccam& m, int first, int last, int k_max);
std::vector<cplx> crossing_amplitudes_float(const Ccam& m, int first, int last, int k_max);

struct RecurrenceState {
    int level;
    cplx delta, phi, chi;
    cplx delta_prev;
    /// |delta_i delta_{i-1} - (phi_i^2 - chi_i^2)| relative to the larger side.
    double identity_residual() const;
};

/// Corner recurrences of the resolvent of the canonical gauge, levels 1..d.
/// Normalized so delta_i = nu_i det(Y_i - lambda), phi_i = nu_i adj(Y_i - lambda)_{FF},
/// chi_i = nu_i adj(Y_i - lambda)_{LF}, nu_i = prod_{j=0}^{i-1} det(Y_j - lambda)^{-(x_{j+1}-1)}
/// with Y_0 the single vertex.
std::vector<RecurrenceState> resolvent_recurrence(const IntSeq& x, double phi, cplx lambda);

struct ExchangeCheck {
    bool symmetric;
    double commutator_norm;   // max-abs entry of [M, J]
};
ExchangeCheck exchange_symmetry_check(const Ccam& m, double tol = 1e-10);

struct ClsState {
    std::vector<std::pair<int, cplx>> amplitudes;   // nonzero entries
    double eigenvalue = 0;
    int support_radius = 0;
    double residual = 0;
};

enum class KrylovMethod {
    automatic,   // spectral when within the dense limit, Lanczos otherwise
    lanczos,     // Gram-Schmidt on M^n|seed> with one re-orthogonalization pass
    spectral     // projections of |seed> onto the eigenspaces of M
};

struct KrylovOptions {
    int cap = 512;
    double closure_tol = 1e-10;
    double support_tol = 1e-9;
    double cluster_tol = 1e-8;
    KrylovMethod method = KrylovMethod::automatic;
    /// Distance used for support radii; graph distance when empty.
    std::function<int(int seed, int v)> distance;
};

struct KrylovResult {
    int seed = 0;
    int krylov_dim = 0;
    bool cap_exceeded = false;
    std::vector<ClsState> states;
    double max_residual = 0;
    int max_radius = 0;
};

/// Eigendecomposition grouped into degenerate clusters, reusable across seeds.
struct SpectralCache {
    EigenDecomposition eig;
    std::vector<std::pair<int, int>> clusters;   // [begin, end) column ranges
};
SpectralCache make_spectral_cache(const SparseC& m, double cluster_tol = 1e-8);

KrylovResult krylov_cls(const SparseC& m, int seed, const KrylovOptions& opt = {},
                        const SpectralCache* cache = nullptr);
KrylovResult krylov_cls(const Ccam& m, int seed, const KrylovOptions& opt = {});

/// ||M^2 e_v - deg(v) e_v||.
double local_caging_residual(const SparseC& m, int v);
bool local_caging_check(const SparseC& m, int v, double tol = 1e-10);
bool local_caging_check(const Ccam& m, int v, double tol = 1e-10);

struct ClsReport {
    std::vector<KrylovResult> seeds;
    int span_rank = 0;
    int dimension = 0;
    bool covered = false;
    std::vector<int> cap_exceeded_seeds;
    std::vector<int> radius_violations;
    double max_residual = 0;
    int max_radius = 0;
    bool ok() const { return covered && cap_exceeded_seeds.empty() && radius_violations.empty(); }
};

ClsReport verify_all_cls(const SparseC& m, int radius_bound, const KrylovOptions& opt = {});
ClsReport verify_all_cls(const Ccam& m, int radius_bound, const KrylovOptions& opt = {});

/// Unit-cell distance on chain_graph(x, cells); roots belong to both adjacent cells.
std::function<int(int, int)> chain_cell_distance(const IntSeq& x, int cells);

} // namespace caged
