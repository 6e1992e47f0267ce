#pragma once

// μ, Λ, φ at a point or over a range, and the divisor-sum identities that
// tie them together.

#include <cstdint>
#include <utility>
#include <vector>

namespace primepairs {

struct ArithValue {
    std::uint64_t n = 1;
    int mu = 1;           // -1, 0, 1
    double lambda = 0.0;  // log p if n = p^k, else 0
    std::uint64_t phi = 1;
};

using Factorization = std::vector<std::pair<std::uint64_t, unsigned>>;

/// Trial division; primes ascending. n >= 1 (n = 1 gives the empty product).
Factorization factorize(std::uint64_t n);

ArithValue from_factorization(std::uint64_t n, const Factorization& f);

/// All three values from one factorization. Throws UsageError for n = 0.
ArithValue evaluate(std::uint64_t n);

/// Bulk evaluation over [lo, hi) using smallest-prime-factor windows.
std::vector<ArithValue> evaluate_range(std::uint64_t lo, std::uint64_t hi);

/// Divisors of the factored number in lexicographic exponent order
/// (first prime's exponent varies slowest), each with its exponent vector.
struct Divisor {
    std::uint64_t d;
    std::vector<unsigned> exponents;
};
std::vector<Divisor> divisors(const Factorization& f);

/// -Σ_{d|n} μ(d) log d evaluated term by term over every divisor.
double vonmangoldt_via_divisors(std::uint64_t n);

struct DivisorIdentityReport {
    std::uint64_t n_max = 0;
    // Σ_{d|n} Λ(d) = log n
    double max_log_deviation = 0.0;
    std::uint64_t worst_n = 1;
    bool log_identity_ok = true;  // deviation <= 1e-9 * (number of divisor terms) for every n
    // Σ_{d|n} μ(d) = [n = 1]
    bool mobius_ok = true;
    std::uint64_t first_mobius_failure = 0;
    // Σ_{d|n} φ(d) = n
    bool totient_ok = true;
    std::uint64_t first_totient_failure = 0;
    bool ok() const { return log_identity_ok && mobius_ok && totient_ok; }
};

/// Checks the three divisor-sum identities for every n <= n_max.
DivisorIdentityReport divisor_identity_suite(std::uint64_t n_max);

}  // namespace primepairs
