#pragma once

// Prime tables, smallest-prime-factor windows and primes in progressions.
//
// Layout: PrimeTable stores one bit per odd integer, bit i <-> n = 2i + 1,
// in 64-bit words. Memory is limit/16 bytes (10^9 -> ~62 MB, 10^10 ->
// ~625 MB). Indexing is 64-bit; kMaxTableLimit is the addressable ceiling,
// available memory is the practical one.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "primepairs/common.hpp"

namespace primepairs {

inline constexpr std::uint64_t kMaxTableLimit = std::uint64_t{1} << 40;
inline constexpr std::uint64_t kDefaultSegmentBits = std::uint64_t{1} << 19;
inline constexpr std::uint64_t kDefaultFactorWindow = std::uint64_t{1} << 22;

/// Residue class {qn + a}. Always reduced: 1 <= a <= q, gcd(a, q) = 1.
struct APClass {
    std::uint64_t a = 1;
    std::uint64_t q = 1;

    /// Validates and builds; throws UsageError for a non-reduced class.
    static APClass make(std::uint64_t a, std::uint64_t q);

    bool contains(std::uint64_t n) const { return n % q == a % q; }
};

struct PrimePower {
    std::uint64_t n;     // base^v, v >= 2
    std::uint64_t base;  // the prime
};

struct SieveOptions {
    std::uint64_t segment_bits = kDefaultSegmentBits;  // multiple of 64
};

class PrimeTable {
public:
    PrimeTable() = default;

    std::uint64_t limit() const { return limit_; }

    /// n <= limit; throws RangeError otherwise.
    bool is_prime(std::uint64_t n) const {
        if (n > limit_) throw RangeError("is_prime: n exceeds table limit");
        return is_prime_unchecked(n);
    }
    bool is_prime_unchecked(std::uint64_t n) const {
        if (n < 3) return n == 2;
        if ((n & 1) == 0) return false;
        const std::uint64_t i = n >> 1;
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    /// Number of primes <= x (x <= limit).
    std::uint64_t count_upto(std::uint64_t x) const;

    /// The prime p if n = p^v (v >= 1), otherwise 0. n <= limit.
    std::uint64_t prime_power_base(std::uint64_t n) const;

    /// Λ(n) for n <= limit, with the logarithm taken at call time.
    double von_mangoldt(std::uint64_t n) const;

    /// p^v <= limit with v >= 2, ascending in n.
    const std::vector<PrimePower>& proper_prime_powers() const { return prime_powers_; }

    /// Calls f(p) for every prime p in [lo, hi], ascending. hi <= limit.
    template <class F>
    void for_each_prime(std::uint64_t lo, std::uint64_t hi, F&& f) const {
        if (hi > limit_) throw RangeError("for_each_prime: hi exceeds table limit");
        if (lo > hi) return;
        if (lo <= 2 && hi >= 2) f(std::uint64_t{2});
        if (hi < 3) return;
        lo = std::max<std::uint64_t>(lo, 3);
        const std::uint64_t first = lo >> 1;  // index of first odd >= lo
        const std::uint64_t last = (hi - 1) >> 1;
        if (first > last) return;
        std::uint64_t w = first >> 6;
        const std::uint64_t w_last = last >> 6;
        std::uint64_t word = words_[w] & (~std::uint64_t{0} << (first & 63));
        for (;;) {
            if (w == w_last) {
                const unsigned top = static_cast<unsigned>(last & 63);
                if (top != 63) word &= (std::uint64_t{1} << (top + 1)) - 1;
            }
            while (word) {
                const std::uint64_t i = (w << 6) | static_cast<unsigned>(std::countr_zero(word));
                f(2 * i + 1);
                word &= word - 1;
            }
            if (w == w_last) break;
            word = words_[++w];
        }
    }

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<const std::uint64_t> count_index() const { return count_index_; }

    bool operator==(const PrimeTable& o) const { return limit_ == o.limit_ && words_ == o.words_; }

private:
    friend PrimeTable build_prime_table(std::uint64_t, const SieveOptions&);
    friend PrimeTable build_prime_table_monolithic(std::uint64_t);
    void finish();  // count index + prime-power list

    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> words_;
    std::vector<std::uint64_t> count_index_;  // set bits before each 8-word block
    std::vector<PrimePower> prime_powers_;
};

/// Segmented, wheel-presieved, OpenMP-parallel construction. Segments are
/// word aligned and owned by one worker each, so the result is the same for
/// any worker count. 2 <= limit <= kMaxTableLimit.
PrimeTable build_prime_table(std::uint64_t limit, const SieveOptions& opts = {});

/// Serial whole-range sieve with one byte per odd integer. Reference
/// implementation for tests and benchmarks only.
PrimeTable build_prime_table_monolithic(std::uint64_t limit);

/// π(x); throws RangeError when x > table.limit().
std::uint64_t prime_count(const PrimeTable& table, std::uint64_t x);

struct APPrimes {
    std::vector<std::uint64_t> primes;
    std::uint64_t count = 0;
};

/// Primes p <= x with p ≡ a (mod q), ascending.
APPrimes primes_in_ap(const PrimeTable& table, std::uint64_t x, APClass ap);

struct LeastPrime {
    std::optional<std::uint64_t> prime;  // empty: cap exceeded
    double cap_exponent = 6.0;
    double search_bound = 0.0;  // q^cap_exponent (saturated at 2^64)
    bool cap_exceeded() const { return !prime.has_value(); }
    /// log p / log q, the observed exponent (q >= 2 and prime found).
    std::optional<double> observed_exponent(std::uint64_t q) const;
};

/// Least prime p ≡ a (mod q) with p < q^cap_exponent. Candidates inside the
/// table are tested against it; beyond it a deterministic Miller-Rabin test
/// extends the search.
LeastPrime least_prime_in_ap(APClass ap, double cap_exponent = 6.0, const PrimeTable* table = nullptr);

/// Deterministic for all 64-bit n.
bool is_prime_u64(std::uint64_t n);

/// All primes <= limit with a plain byte sieve. For base primes of windows.
std::vector<std::uint64_t> small_primes(std::uint64_t limit);

/// Smallest-prime-factor window over [lo, hi).
class FactorSegment {
public:
    std::uint64_t lo() const { return lo_; }
    std::uint64_t hi() const { return hi_; }
    bool contains(std::uint64_t n) const { return n >= lo_ && n < hi_; }

    std::uint64_t spf(std::uint64_t n) const { return spf_[at(n)]; }
    /// n with every power of spf(n) divided out.
    std::uint64_t remaining(std::uint64_t n) const { return remaining_[at(n)]; }
    bool is_prime(std::uint64_t n) const { return spf(n) == n; }
    int mu(std::uint64_t n) const { return mu_[at(n)]; }
    std::uint64_t phi(std::uint64_t n) const { return phi_[at(n)]; }
    /// p when n = p^v, else 0.
    std::uint64_t prime_power_base(std::uint64_t n) const {
        const std::size_t i = at(n);
        return remaining_[i] == 1 ? spf_[i] : 0;
    }

    /// Full factorization (prime, exponent), primes ascending, following the
    /// spf chain while it stays in the window and trial dividing by the
    /// window's base primes once it leaves.
    std::vector<std::pair<std::uint64_t, unsigned>> factor(std::uint64_t n) const;

private:
    friend FactorSegment factor_segment(std::uint64_t, std::uint64_t,
                                        std::shared_ptr<const std::vector<std::uint64_t>>, std::uint64_t);
    std::size_t at(std::uint64_t n) const {
        if (!contains(n)) throw RangeError("FactorSegment: n outside window");
        return static_cast<std::size_t>(n - lo_);
    }

    std::uint64_t lo_ = 2;
    std::uint64_t hi_ = 2;
    std::vector<std::uint64_t> spf_;
    std::vector<std::uint64_t> remaining_;
    std::vector<std::int8_t> mu_;
    std::vector<std::uint64_t> phi_;
    std::shared_ptr<const std::vector<std::uint64_t>> base_primes_;
};

/// Requires 2 <= lo < hi and hi - lo <= max_window (UsageError otherwise).
FactorSegment factor_segment(std::uint64_t lo, std::uint64_t hi, std::uint64_t max_window = kDefaultFactorWindow);

/// As above, reusing base primes covering at least sqrt(hi - 1).
FactorSegment factor_segment(std::uint64_t lo, std::uint64_t hi,
                             std::shared_ptr<const std::vector<std::uint64_t>> base_primes,
                             std::uint64_t max_window = kDefaultFactorWindow);

}  // namespace primepairs
