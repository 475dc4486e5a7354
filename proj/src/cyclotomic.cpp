#include "caged/cyclotomic.hpp"
#include "caged/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace caged {

namespace {

using Poly = std::vector<__int128>;

// Exact division by a monic polynomial; returns the remainder (quotient if want_quotient).
Poly divide_monic(Poly num, const Poly& den, bool want_quotient)
{
    const int dn = static_cast<int>(den.size()) - 1;
    const int nn = static_cast<int>(num.size()) - 1;
    if (nn < dn) return want_quotient ? Poly{0} : num;
    Poly q(nn - dn + 1, 0);
    for (int i = nn; i >= dn; --i) {
        __int128 lead = num[i];
        if (lead == 0) continue;
        q[i - dn] = lead;
        for (int j = 0; j <= dn; ++j) num[i - dn + j] -= lead * den[j];
    }
    if (want_quotient) return q;
    num.resize(dn > 0 ? dn : 1);
    return num;
}

const Poly& cyclotomic_cached(int n)
{
    static std::map<int, Poly> cache;
    static std::recursive_mutex mu;
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    Poly p(n + 1, 0);
    p[0] = -1;
    p[n] = 1;
    for (int d = 1; d < n; ++d)
        if (n % d == 0) p = divide_monic(p, cyclotomic_cached(d), true);
    return cache[n] = p;
}

} // namespace

std::vector<std::int64_t> cyclotomic_polynomial(int n)
{
    if (n < 1) throw InvalidParameter("cyclotomic order must be >= 1");
    const auto& p = cyclotomic_cached(n);
    return {p.begin(), p.end()};
}

void CyclotomicInt::add_rotated(const CyclotomicInt& other, int shift)
{
    const int n = order();
    shift = ((shift % n) + n) % n;
    for (int j = 0; j < n; ++j) {
        int k = j + shift;
        if (k >= n) k -= n;
        c_[k] += other.c_[j];
    }
}

std::vector<std::int64_t> CyclotomicInt::reduced() const
{
    Poly num(c_.begin(), c_.end());
    Poly r = divide_monic(num, cyclotomic_cached(order()), false);
    return {r.begin(), r.end()};
}

bool CyclotomicInt::is_zero() const
{
    for (auto v : reduced())
        if (v != 0) return false;
    return true;
}

std::complex<double> CyclotomicInt::value() const
{
    auto r = reduced();
    const int n = order();
    std::complex<double> s = 0;
    for (std::size_t j = 0; j < r.size(); ++j)
        if (r[j]) s += static_cast<double>(r[j]) * std::polar(1.0, 2 * std::numbers::pi * j / n);
    return s;
}

int common_root_order(const std::vector<double>& thetas, int max_order, double tol)
{
    for (int n = 1; n <= max_order; ++n) {
        bool ok = true;
        for (double t : thetas) {
            double z = t * n / (2 * std::numbers::pi);
            if (std::abs(z - std::round(z)) > tol) {
                ok = false;
                break;
            }
        }
        if (ok) return n;
    }
    return 0;
}

} // namespace caged
