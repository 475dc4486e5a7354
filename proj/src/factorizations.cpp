#include "caged/errors.hpp"
#include "caged/graphs.hpp"

namespace caged {

namespace {

std::int64_t binomial(std::int64_t n, std::int64_t k)
{
    if (k < 0 || n < k) return 0;
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::vector<int> prime_exponents(std::int64_t m)
{
    std::vector<int> a;
    for (std::int64_t p = 2; p * p <= m; ++p) {
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e) a.push_back(e);
    }
    if (m > 1) a.push_back(1);
    return a;
}

void enumerate(std::int64_t m, std::vector<std::int64_t>& prefix,
               std::vector<std::vector<std::int64_t>>& out)
{
    if (m == 1) {
        out.push_back(prefix);
        return;
    }
    for (std::int64_t d = 2; d <= m; ++d) {
        if (m % d) continue;
        prefix.push_back(d);
        enumerate(m / d, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

// Inclusion-exclusion over factors equal to 1: an ordered factorization into k
// factors >= 1 distributes each prime exponent a_i over k slots.
std::int64_t ordered_factorization_count(std::int64_t m)
{
    if (m < 1) throw InvalidParameter("ordered factorizations need m >= 1");
    if (m == 1) return 1;
    auto a = prime_exponents(m);
    int omega = 0;
    for (int e : a) omega += e;
    std::int64_t total = 0;
    for (int k = 1; k <= omega; ++k)
        for (int j = 0; j <= k; ++j) {
            std::int64_t term = binomial(k, j);
            for (int e : a) term *= binomial(e + k - j - 1, e);
            total += (j % 2 ? -term : term);
        }
    return total;
}

Factorizations ordered_factorizations(std::int64_t m, bool with_list)
{
    Factorizations f;
    f.count = ordered_factorization_count(m);
    if (with_list) {
        std::vector<std::int64_t> prefix;
        enumerate(m, prefix, f.list);
    }
    return f;
}

} // namespace caged
