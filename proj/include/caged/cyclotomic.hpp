#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace caged {

/// Integer coefficients of the n-th cyclotomic polynomial, constant term first.
std::vector<std::int64_t> cyclotomic_polynomial(int n);

/// Element of Z[zeta_n] stored as sum_j c_j zeta^j, j < n (not reduced).
class CyclotomicInt {
public:
    explicit CyclotomicInt(int n = 1) : c_(n, 0) {}

    int order() const { return static_cast<int>(c_.size()); }
    std::int64_t& operator[](int j) { return c_[j]; }
    std::int64_t operator[](int j) const { return c_[j]; }

    /// Add zeta^shift * other.
    void add_rotated(const CyclotomicInt& other, int shift);
    /// Canonical form modulo the cyclotomic polynomial (length phi(n)).
    std::vector<std::int64_t> reduced() const;
    bool is_zero() const;
    std::complex<double> value() const;

private:
    std::vector<std::int64_t> c_;
};

/// Smallest n <= max_order with n * theta / 2pi within tol of an integer for
/// every theta, or 0 if there is none.
int common_root_order(const std::vector<double>& thetas, int max_order = 4096, double tol = 1e-9);

} // namespace caged
