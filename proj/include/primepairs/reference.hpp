#pragma once

// Plain single-threaded versions of the main kernels: one loop, no chunking,
// no windows. Slow but easy to audit; tests and benchmarks compare against
// them.

#include <cstdint>

#include "primepairs/sieve.hpp"
#include "primepairs/trace.hpp"

namespace primepairs::reference {

/// Σ_{p <= x} Λ(m p + k) / p.
double pair_weighted_sum(const PrimeTable& table, std::uint64_t x, const LinearForm& form);

/// #{p <= x : m p + k prime and <= x}.
std::uint64_t pair_count(const PrimeTable& table, std::uint64_t x, const LinearForm& form);

/// Σ_{n <= x} Λ(n).
double psi(const PrimeTable& table, std::uint64_t x);

/// Σ_{n <= x} μ(n) log^j(n) / n^s with μ from a linear sieve.
double mobius_log_sum(std::uint64_t x, double s, int log_power);

}  // namespace primepairs::reference
