#pragma once

// Exact finite sums over primes, prime powers and squarefree integers.
//
// Every sum is accumulated with compensated addition in ascending order
// inside fixed chunks, and chunk partials are reduced in chunk order, so a
// value does not depend on the worker count. Functions taking a LinearForm
// require max(x, m x + k) <= table.limit() and attach a warning when the
// form is not parity admissible (results are still computed).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "primepairs/sieve.hpp"
#include "primepairs/trace.hpp"

namespace primepairs {

struct FormSum {
    double value = 0;
    std::optional<std::string> warning;
};

// ---- primes in a residue class ------------------------------------------

enum class PrimeWeight { Reciprocal, LogOverP };

struct MertensResult {
    double value = 0;
    /// Reciprocal weight only: log log x / φ(q) + 1 / p(a, q), when x > 1
    /// and the least prime of the class exists below q^6.
    std::optional<double> main;
    std::optional<double> residual;
    std::optional<std::uint64_t> least_prime;
};

/// Σ_{p <= x, p ≡ a (q)} w(p) with w = 1/p or log p / p.
MertensResult mertens_ap(const PrimeTable& table, std::uint64_t x, APClass ap, PrimeWeight weight);
SumTrace mertens_ap_trace(const PrimeTable& table, std::span<const std::uint64_t> grid, APClass ap,
                          PrimeWeight weight);

/// The same sums for every residue r mod q at once: result[i][r] at grid[i].
std::vector<std::vector<double>> class_sums(const PrimeTable& table, std::span<const std::uint64_t> grid,
                                            std::uint64_t q, PrimeWeight weight);

/// ψ(x, q, a) = Σ_{n <= x, n ≡ a (q)} Λ(n) and π(x, q, a). gcd(a, q) = 1.
double psi_ap(const PrimeTable& table, std::uint64_t x, std::uint64_t q, std::uint64_t a);
std::uint64_t pi_ap(const PrimeTable& table, std::uint64_t x, std::uint64_t q, std::uint64_t a);

/// ψ(x) = Σ_{n <= x} Λ(n).
double psi(const PrimeTable& table, std::uint64_t x);

/// ψ(x, q, r) for every r in [0, q): result[i][r] at grid[i].
std::vector<std::vector<double>> psi_residues(const PrimeTable& table, std::span<const std::uint64_t> grid,
                                              std::uint64_t q);

/// Σ_{n <= x} Λ(n) / n^σ at each grid point.
std::vector<double> lambda_dirichlet_partial(const PrimeTable& table, std::span<const std::uint64_t> grid,
                                             double sigma);

// ---- sums along a linear form -------------------------------------------

/// Σ_{p <= x} Λ(m p + k) / p.
FormSum pair_weighted_sum(const PrimeTable& table, std::uint64_t x, const LinearForm& form);
SumTrace pair_weighted_trace(const PrimeTable& table, std::span<const std::uint64_t> grid, const LinearForm& form);

struct InversionOptions {
    /// Keep only d with gcd(d, k m) = 1.
    bool restricted = false;
    /// Drop primes p dividing k from the inner sums.
    bool exclude_primes_dividing_k = false;
};

struct InversionTerm {
    std::uint64_t d;
    int mu;
    double inner;  // Σ 1/p over p <= x with d | m p + k
};

struct InversionResult {
    double value = 0;
    std::vector<InversionTerm> ledger;  // d ascending, nonzero inner sums only
    std::optional<std::string> warning;
};

/// -Σ_{d <= m x + k} μ(d) log d Σ_{p <= x, d | m p + k} 1/p, with d outer.
/// Unrestricted, this equals pair_weighted_sum exactly (Möbius inversion).
InversionResult inversion_decomposition(const PrimeTable& table, std::uint64_t x, const LinearForm& form,
                                        InversionOptions options = {});

/// The same double sum at every checkpoint, in one pass over d.
std::vector<double> inversion_decomposition_trace(const PrimeTable& table, std::span<const std::uint64_t> checkpoints,
                                                  const LinearForm& form, InversionOptions options = {});

/// Pair-weighted sum with primes dividing k removed (the complement of the
/// primes where the restricted inversion differs).
double pair_weighted_sum_excluding_k_divisors(const PrimeTable& table, std::uint64_t x, const LinearForm& form);

enum class PairWeight { Reciprocal, Unweighted };

/// Σ over primes x0 < p <= x with m p + k = q^v, v >= 2, of Λ(m p + k)
/// (times 1/p for Reciprocal).
FormSum prime_power_pair_sum(const PrimeTable& table, std::uint64_t x, const LinearForm& form, PairWeight weight,
                             std::optional<std::uint64_t> tail_from = std::nullopt);
SumTrace prime_power_pair_trace(const PrimeTable& table, std::span<const std::uint64_t> grid, const LinearForm& form,
                                PairWeight weight);

/// Σ_{p <= x} Λ(m p + k). Trace main term is li(x).
FormSum lambda_pair_sum(const PrimeTable& table, std::uint64_t x, const LinearForm& form);
SumTrace lambda_pair_trace(const PrimeTable& table, std::span<const std::uint64_t> grid, const LinearForm& form);

/// #{p : p and m p + k prime, both <= x}. Requires x <= table.limit().
std::uint64_t pair_count(const PrimeTable& table, std::uint64_t x, const LinearForm& form);
SumTrace pair_count_trace(const PrimeTable& table, std::span<const std::uint64_t> grid, const LinearForm& form);

/// Σ_{n <= x} Λ(n) Λ(m n + k) / n^s, s >= 1.
FormSum hl_partial_sum(const PrimeTable& table, std::uint64_t x, double s, const LinearForm& form);

struct TailSplit {
    double total = 0;
    double pair_part = 0;   // m p + k prime
    double power_part = 0;  // m p + k a proper prime power
    std::optional<std::string> warning;
};

/// Σ_{x0 < p <= x} Λ(m p + k) / p split by the shape of m p + k.
TailSplit chebyshev_tail(const PrimeTable& table, std::uint64_t x0, std::uint64_t x, const LinearForm& form);

// ---- Möbius sums ----------------------------------------------------------

struct MobiusFilter {
    enum class Kind { None, CoprimeTo, Residue };
    Kind kind = Kind::None;
    std::uint64_t q = 1;
    std::uint64_t a = 0;

    static MobiusFilter none() { return {}; }
    static MobiusFilter coprime_to(std::uint64_t q);
    static MobiusFilter residue(std::uint64_t a, std::uint64_t q);
    bool accepts(std::uint64_t n) const;
    std::string label() const;
};

struct TwistedMobiusResult {
    double value = 0;
    /// log_power 1 without a filter: ζ'(s)/ζ(s)^2 for s > 1, -1 at s = 1.
    std::optional<double> target;
    std::optional<double> gap;  // value - target
};

/// Σ_{n <= x, filter} μ(n) log^{log_power}(n) / n^s, log_power in {1, 2},
/// s in [1/2, 4].
TwistedMobiusResult twisted_mobius_sum(std::uint64_t x, double s, int log_power, MobiusFilter filter = {});
SumTrace twisted_mobius_trace(std::span<const std::uint64_t> grid, double s, int log_power,
                              MobiusFilter filter = {});

/// Table limit needed to evaluate a form sum up to x.
std::uint64_t required_limit(std::uint64_t x, const LinearForm& form);

}  // namespace primepairs
