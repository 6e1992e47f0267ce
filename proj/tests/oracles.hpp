#pragma once

// Brute-force reference computations for the tests. Nothing here touches the
// library: primality is trial division or a plain byte sieve, arithmetic
// functions come from trial-division factorizations, sums are direct loops.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Plain byte sieve over every integer in [0, limit].
inline std::vector<char> sieve(std::uint64_t limit) {
    std::vector<char> p(limit + 1, 1);
    p[0] = 0;
    if (limit >= 1) p[1] = 0;
    for (std::uint64_t i = 2; i * i <= limit; ++i)
        if (p[i])
            for (std::uint64_t j = i * i; j <= limit; j += i) p[j] = 0;
    return p;
}

inline std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, unsigned>> f;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        unsigned e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        if (e) f.emplace_back(d, e);
    }
    if (n > 1) f.emplace_back(n, 1u);
    return f;
}

inline int mu(std::uint64_t n) {
    int s = 1;
    for (auto [p, e] : factorize(n)) {
        if (e > 1) return 0;
        s = -s;
    }
    return s;
}

inline std::uint64_t phi(std::uint64_t n) {
    std::uint64_t c = 0;
    for (std::uint64_t r = 1; r <= n; ++r) c += std::gcd(r, n) == 1;
    return c;
}

inline double lambda(std::uint64_t n) {
    if (n < 2) return 0.0;
    auto f = factorize(n);
    return f.size() == 1 ? std::log(static_cast<double>(f[0].first)) : 0.0;
}

/// Σ_{p <= x, p prime} f(p) by trial division.
template <class F>
double sum_over_primes(std::uint64_t x, F f) {
    long double s = 0;
    for (std::uint64_t p = 2; p <= x; ++p)
        if (is_prime(p)) s += f(p);
    return static_cast<double>(s);
}

}  // namespace oracle
