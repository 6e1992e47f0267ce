#pragma once

// Dirichlet characters mod q with exact values.
//
// The unit group (Z/q)* is split by CRT into cyclic factors: a primitive root
// for each odd prime power, {-1, 5} for 2^e (e >= 3), -1 for 4. A character
// is an exponent vector over those generators; its value at a unit n is the
// root of unity exp(2πi k/N), N the group exponent, stored as the integer k.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace primepairs {

class PrimeTable;

inline constexpr std::uint64_t kMaxCharacterModulus = 1'000'000;

/// exp(2πi num/den) with 0 <= num < den.
struct RootOfUnity {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    std::complex<double> to_complex() const;
    RootOfUnity conj() const { return {num == 0 ? 0 : den - num, den}; }
    /// Lowest terms, for display and comparison.
    RootOfUnity reduced() const;
    bool operator==(const RootOfUnity& o) const;
};

/// Product; the denominator is the lcm of the two.
RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b);

/// Integer combination Σ c_k exp(2πi k/N), kept as the count vector c.
class ExactRootSum {
public:
    explicit ExactRootSum(std::uint64_t n);

    void add(RootOfUnity r, std::int64_t times = 1);
    void add(const std::optional<RootOfUnity>& r) {
        if (r) add(*r);
    }

    void clear() { std::fill(counts_.begin(), counts_.end(), 0); }
    std::uint64_t order() const { return counts_.size(); }
    std::span<const std::int64_t> counts() const { return counts_; }
    std::complex<double> value() const;

    /// Exact test of Σ c_k ζ^k == v. Counts that become periodic with period
    /// N/p after subtracting v are certified directly; anything else falls
    /// back to division by the N-th cyclotomic polynomial.
    bool equals(std::int64_t v) const;

private:
    std::vector<std::int64_t> counts_;
};

class CharacterGroup {
public:
    struct Generator {
        std::uint64_t g;      // residue mod q
        std::uint64_t order;  // order of g in (Z/q)*
    };

    std::uint64_t q() const { return q_; }
    std::uint64_t phi() const { return phi_; }
    /// lcm of the generator orders; every value is an N-th root of unity.
    std::uint64_t exponent() const { return exponent_; }
    const std::vector<Generator>& generators() const { return gens_; }
    bool cyclic() const { return gens_.size() <= 1; }

    bool is_unit(std::uint64_t n) const { return unit_[n % q_] != 0; }
    /// Exponents of n over the generators. n must be a unit.
    std::span<const std::uint32_t> log(std::uint64_t n) const;
    /// Π g_i^{e_i} mod q.
    std::uint64_t recombine(std::span<const std::uint32_t> exps) const;

    /// The exponent k in exp(2πi k/N) of the character `index` at unit n.
    std::uint64_t value_exponent(std::span<const std::uint32_t> index, std::uint64_t n) const;

    /// Human-readable structure, e.g. "C2 x C4".
    std::string structure() const;

private:
    friend std::shared_ptr<const CharacterGroup> character_group(std::uint64_t q);
    std::uint64_t q_ = 1, phi_ = 1, exponent_ = 1;
    std::vector<Generator> gens_;
    std::vector<std::uint64_t> weight_;  // N / order_i
    std::vector<std::uint8_t> unit_;
    std::vector<std::uint32_t> logs_;  // q x gens_.size()
};

using GroupPtr = std::shared_ptr<const CharacterGroup>;

/// Throws UsageError for q = 0 or q > kMaxCharacterModulus.
GroupPtr character_group(std::uint64_t q);

struct Character {
    GroupPtr group;
    std::vector<std::uint32_t> index;  // one exponent per generator

    bool principal() const;
    /// exp(2πi k/N) or nullopt when gcd(n, q) > 1.
    std::optional<RootOfUnity> operator()(std::uint64_t n) const;
    Character conj() const;
};

/// All φ(q) characters, principal first, then in mixed-radix order of index.
std::vector<Character> characters(const GroupPtr& group);
Character principal_character(const GroupPtr& group);

std::optional<RootOfUnity> evaluate_character(const Character& chi, std::uint64_t n);

struct TwistedPsi {
    std::uint64_t x = 0;
    Character chi;
    std::complex<double> value;
};

/// ψ(x, χ) = Σ_{n <= x} χ(n) Λ(n). The Λ mass is binned by the exponent of
/// χ(n) and converted to complex once.
std::complex<double> psi_twisted(const PrimeTable& table, std::uint64_t x, const Character& chi);
std::vector<TwistedPsi> psi_twisted_trace(const PrimeTable& table, std::span<const std::uint64_t> grid,
                                          const Character& chi);

/// Twist of precomputed ψ(x, q, r), r in [0, q), as from psi_residues.
std::complex<double> psi_twisted_from_residues(std::span<const double> residues, const Character& chi);

/// ψ(x, χ) for every character of the group, from one residue-class sweep.
std::vector<std::complex<double>> psi_twisted_all(const PrimeTable& table, std::uint64_t x, const GroupPtr& group);

/// (1/φ(q)) Σ_χ χ̄(a) ψ(x, χ). The imaginary part is rounding noise.
std::complex<double> psi_ap_via_characters(const PrimeTable& table, std::uint64_t x, std::uint64_t q,
                                           std::uint64_t a);

/// Σ_{χ ≠ χ0} χ̄(a), summed exactly over the character table.
ExactRootSum nonprincipal_character_sum(std::uint64_t q, std::uint64_t a);

}  // namespace primepairs
