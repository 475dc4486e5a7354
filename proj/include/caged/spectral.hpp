#pragma once

#include "caged/errors.hpp"
#include "caged/graphs.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

namespace caged {

struct Level {
    double value;
    std::int64_t multiplicity;
};

struct Spectrum {
    std::vector<Level> levels;   // strictly increasing values

    static Spectrum from_values(std::vector<double> values, double tol = 1e-8);
    static Spectrum from_weighted(std::vector<Level> values, double tol = 1e-8);
    std::int64_t size() const;
    std::vector<double> expanded() const;
};

struct EigenDecomposition {
    Eigen::VectorXd values;      // ascending
    Eigen::MatrixXcd vectors;    // columns
    Spectrum spectrum;
};

EigenDecomposition hermitian_eigensolve(const Eigen::MatrixXcd& m, double hermitian_tol = 1e-10);

template <class Real = double>
struct Tridiag {
    using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
    Vec diagonal, offdiagonal;

    Eigen::Index size() const { return diagonal.size(); }
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> dense() const
    {
        const auto n = size();
        Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> t =
            Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
        t.diagonal() = diagonal;
        for (Eigen::Index i = 0; i + 1 < n; ++i) t(i, i + 1) = t(i + 1, i) = offdiagonal[i];
        return t;
    }
};

/// Zero diagonal with the given off-diagonal.
template <class Real = double>
Tridiag<Real> hollow_tridiag(const std::vector<Real>& off)
{
    Tridiag<Real> t;
    t.diagonal = Tridiag<Real>::Vec::Zero(static_cast<Eigen::Index>(off.size()) + 1);
    t.offdiagonal = Eigen::Map<const typename Tridiag<Real>::Vec>(off.data(), off.size());
    return t;
}

/// Number of eigenvalues strictly below x (Sturm sequence).
template <class Real>
Eigen::Index sturm_count(const Tridiag<Real>& t, Real x)
{
    const Real tiny = std::numeric_limits<Real>::min() / std::numeric_limits<Real>::epsilon();
    Eigen::Index count = 0;
    Real q = 1;
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        const Real e2 = i ? t.offdiagonal[i - 1] * t.offdiagonal[i - 1] : Real(0);
        q = (t.diagonal[i] - x) - (i ? e2 / q : Real(0));
        if (q == 0) q = -tiny;
        if (q < 0) ++count;
    }
    return count;
}

/// Eigenvalues by bisection on Sturm counts, ascending.
template <class Real>
Eigen::Matrix<Real, Eigen::Dynamic, 1> tridiagonal_eigenvalues(const Tridiag<Real>& t)
{
    using std::abs;
    const Eigen::Index n = t.size();
    if (t.offdiagonal.size() != std::max<Eigen::Index>(n - 1, 0))
        throw InvalidParameter("off-diagonal length must be one less than the diagonal");
    Eigen::Matrix<Real, Eigen::Dynamic, 1> ev(n);
    if (n == 0) return ev;
    if (n == 1) {
        ev[0] = t.diagonal[0];
        return ev;
    }
    Real lo = t.diagonal[0], hi = t.diagonal[0];
    for (Eigen::Index i = 0; i < n; ++i) {
        Real r = (i ? abs(t.offdiagonal[i - 1]) : Real(0)) + (i + 1 < n ? abs(t.offdiagonal[i]) : Real(0));
        lo = std::min(lo, t.diagonal[i] - r);
        hi = std::max(hi, t.diagonal[i] + r);
    }
    const Real eps = std::numeric_limits<Real>::epsilon();
    const Real pad = (hi - lo + 1) * eps * 4;
    lo -= pad;
    hi += pad;
    const Real floor = eps * (hi - lo) / 4;
    for (Eigen::Index k = 0; k < n; ++k) {
        Real a = k ? std::max(lo, ev[k - 1]) : lo, b = hi;
        for (int it = 0; it < 200; ++it) {
            Real mid = (a + b) / 2;
            if (mid <= a || mid >= b || b - a < floor) break;
            if (sturm_count(t, mid) > k)
                b = mid;
            else
                a = mid;
        }
        ev[k] = (a + b) / 2;
    }
    return ev;
}

/// gamma_n(lambda) for gamma_i = -lambda gamma_{i-1} - x_{floor(i/2)} gamma_{i-2},
/// gamma_0 = 1, gamma_{-1} = 0 (x_0 never contributes).
template <class Scalar>
Scalar continuant_eval(const IntSeq& x, Scalar lambda, int n)
{
    if (n < 0) throw InvalidParameter("continuant index must be >= 0");
    if (n / 2 > x.depth()) throw InvalidParameter("continuant index beyond the growth sequence");
    Scalar prev = 0, cur = 1;
    for (int i = 1; i <= n; ++i) {
        const int k = i / 2;
        Scalar next = -lambda * cur - (k >= 1 ? Scalar(x[k - 1]) * prev : Scalar(0));
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Block with off-diagonal (sqrt x_i, ..., sqrt x_1, sqrt x_1, ..., sqrt x_i).
Tridiag<double> fluxless_block(const IntSeq& x, int i);
/// Block with off-diagonal (sqrt x_1, ..., sqrt x_i).
Tridiag<double> flux_af_block(const IntSeq& x, int i);

Spectrum spectrum_fluxless(const IntSeq& x);
Spectrum spectrum_flux_af(const IntSeq& x);
std::vector<double> pnary_closed_form(int p, int n);

struct ShellReduction {
    Tridiag<double> tridiag;
    std::vector<std::int64_t> shell_sizes;
    double closure_residual = 0;
};

ShellReduction distance_shell_reduction(const IntSeq& x, double phi = 0.0);

} // namespace caged
