#include "primepairs/dirichlet.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "primepairs/arith.hpp"
#include "primepairs/common.hpp"
#include "primepairs/sieve.hpp"
#include "primepairs/sums.hpp"

namespace primepairs {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    for (; e; e >>= 1) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
    }
    return r;
}

std::complex<double> unit_root(std::uint64_t k, std::uint64_t n) {
    if (k == 0) return {1.0, 0.0};
    // exact on the axes so that ±1 and ±i carry no rounding
    if (4 * k == n) return {0.0, 1.0};
    if (2 * k == n) return {-1.0, 0.0};
    if (4 * k == 3 * n) return {0.0, -1.0};
    const double t = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    return {std::cos(t), std::sin(t)};
}

/// Smallest primitive root mod p^e, p odd.
std::uint64_t primitive_root(std::uint64_t p, unsigned e) {
    std::uint64_t pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= p;
    const std::uint64_t phi = pe / p * (p - 1);
    std::vector<std::uint64_t> factors;
    for (auto [r, k] : factorize(phi)) {
        (void)k;
        factors.push_back(r);
    }
    for (std::uint64_t g = 2; g < pe; ++g) {
        if (g % p == 0) continue;
        bool ok = true;
        for (std::uint64_t r : factors)
            if (powmod(g, phi / r, pe) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    return 1;  // pe == 2 only; not reached for odd p
}

/// The residue mod q that is g mod pe and 1 mod q / pe.
std::uint64_t lift(std::uint64_t g, std::uint64_t pe, std::uint64_t q) {
    const std::uint64_t rest = q / pe;
    if (rest == 1) return g % q;
    // x = 1 + rest * t with rest * t ≡ g - 1 (mod pe)
    const std::uint64_t t = mulmod((g + pe - 1) % pe, inverse_mod(rest % pe, pe), pe);
    return (1 + rest * t) % q;
}

}  // namespace

// ---- roots of unity ---------------------------------------------------------

std::complex<double> RootOfUnity::to_complex() const { return unit_root(num, den); }

RootOfUnity RootOfUnity::reduced() const {
    const std::uint64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

bool RootOfUnity::operator==(const RootOfUnity& o) const {
    const auto a = reduced(), b = o.reduced();
    return a.num == b.num && a.den == b.den;
}

RootOfUnity operator*(const RootOfUnity& a, const RootOfUnity& b) {
    if (a.den == b.den) return {(a.num + b.num) % a.den, a.den};
    const std::uint64_t den = std::lcm(a.den, b.den);
    return {(a.num * (den / a.den) + b.num * (den / b.den)) % den, den};
}

ExactRootSum::ExactRootSum(std::uint64_t n) : counts_(n == 0 ? 1 : n, 0) {}

void ExactRootSum::add(RootOfUnity r, std::int64_t times) {
    const std::uint64_t n = counts_.size();
    if (n % r.den != 0) throw UsageError("root of unity does not divide the sum's order");
    counts_[r.num * (n / r.den) % n] += times;
}

std::complex<double> ExactRootSum::value() const {
    KahanSum re, im;
    for (std::size_t k = 0; k < counts_.size(); ++k) {
        if (!counts_[k]) continue;
        const auto z = unit_root(k, counts_.size()) * static_cast<double>(counts_[k]);
        re += z.real();
        im += z.imag();
    }
    return {re.value(), im.value()};
}

bool ExactRootSum::equals(std::int64_t v) const {
    const std::size_t n = counts_.size();
    auto c = [&](std::size_t k) { return k == 0 ? counts_[0] - v : counts_[k]; };
    bool zero = true;
    for (std::size_t k = 0; k < n && zero; ++k) zero = c(k) == 0;
    if (zero) return true;
    std::vector<std::uint64_t> primes;
    for (auto [p, e] : factorize(n)) {
        (void)e;
        primes.push_back(p);
    }
    // a vector invariant under shift by n/p sums to a multiple of 1 + ζ_p + ... = 0
    for (std::uint64_t p : primes) {
        const std::size_t shift = n / p;
        bool periodic = true;
        for (std::size_t k = 0; k < n && periodic; ++k) periodic = c(k) == c((k + shift) % n);
        if (periodic) return true;
    }
    std::vector<std::int64_t> c_copy = counts_;
    c_copy[0] -= v;
    // cheap rejection before the exact test
    double scale = 1;
    for (auto x : c_copy) scale += std::abs(static_cast<double>(x));
    ExactRootSum diff(n);
    diff.counts_ = c_copy;
    if (std::abs(diff.value()) > 1e-6 * scale) return false;

    // Φ_rad(x) by Φ_{mp}(x) = Φ_m(x^p) / Φ_m(x), then Φ_n(x) = Φ_rad(x^{n / rad})
    std::vector<__int128> phi = {-1, 1};
    std::uint64_t rad = 1;
    for (std::uint64_t p : primes) {
        std::vector<__int128> up((phi.size() - 1) * p + 1, 0);
        for (std::size_t i = 0; i < phi.size(); ++i) up[i * p] = phi[i];
        // exact division of up by the monic phi
        const std::size_t dq = up.size() - phi.size();
        std::vector<__int128> quot(dq + 1, 0);
        for (std::size_t i = up.size(); i-- > phi.size() - 1;) {
            const __int128 lead = up[i];
            const std::size_t j = i - (phi.size() - 1);
            quot[j] = lead;
            if (lead != 0)
                for (std::size_t t = 0; t < phi.size(); ++t) up[j + t] -= lead * phi[t];
        }
        phi = std::move(quot);
        rad *= p;
    }
    const std::size_t stretch = n / rad;
    std::vector<std::pair<std::size_t, __int128>> cyclo;  // sparse Φ_n without its leading term
    const std::size_t deg = (phi.size() - 1) * stretch;
    for (std::size_t i = 0; i + 1 < phi.size(); ++i)
        if (phi[i] != 0) cyclo.emplace_back(i * stretch, phi[i]);
    std::vector<__int128> r(c_copy.begin(), c_copy.end());
    for (std::size_t i = n; i-- > deg;) {
        const __int128 lead = r[i];
        if (lead == 0) continue;
        r[i] = 0;
        const std::size_t j = i - deg;
        for (auto [t, a] : cyclo) r[j + t] -= lead * a;
    }
    return std::all_of(r.begin(), r.end(), [](__int128 x) { return x == 0; });
}

// ---- groups -----------------------------------------------------------------

GroupPtr character_group(std::uint64_t q) {
    if (q == 0 || q > kMaxCharacterModulus)
        throw UsageError("character_group: q must be in [1, " + std::to_string(kMaxCharacterModulus) + "]");
    auto grp = std::make_shared<CharacterGroup>();
    grp->q_ = q;
    for (auto [p, e] : factorize(q)) {
        std::uint64_t pe = 1;
        for (unsigned i = 0; i < e; ++i) pe *= p;
        if (p == 2) {
            if (e >= 2) grp->gens_.push_back({lift(pe - 1, pe, q), 2});
            if (e >= 3) grp->gens_.push_back({lift(5, pe, q), pe / 4});
        } else {
            grp->gens_.push_back({lift(primitive_root(p, e), pe, q), pe / p * (p - 1)});
        }
    }
    grp->phi_ = 1;
    grp->exponent_ = 1;
    for (const auto& g : grp->gens_) {
        grp->phi_ *= g.order;
        grp->exponent_ = std::lcm(grp->exponent_, g.order);
    }
    for (const auto& g : grp->gens_) grp->weight_.push_back(grp->exponent_ / g.order);

    const std::size_t ng = grp->gens_.size();
    grp->unit_.assign(q, 0);
    grp->logs_.assign(q * ng, 0);
    // walk every exponent vector; stepping a digit multiplies by its
    // generator, including on wrap-around since g^order = 1
    std::vector<std::uint32_t> digits(ng, 0);
    std::uint64_t value = 1 % q;
    for (std::uint64_t count = 0; count < grp->phi_; ++count) {
        grp->unit_[value] = 1;
        std::copy(digits.begin(), digits.end(), grp->logs_.begin() + static_cast<std::ptrdiff_t>(value * ng));
        for (std::size_t i = 0; i < ng; ++i) {
            value = mulmod(value, grp->gens_[i].g, q);
            if (++digits[i] < grp->gens_[i].order) break;
            digits[i] = 0;
        }
    }
    return grp;
}

std::span<const std::uint32_t> CharacterGroup::log(std::uint64_t n) const {
    n %= q_;
    if (!unit_[n]) throw UsageError("discrete log of a non-unit");
    return {logs_.data() + n * gens_.size(), gens_.size()};
}

std::uint64_t CharacterGroup::recombine(std::span<const std::uint32_t> exps) const {
    std::uint64_t v = 1 % q_;
    for (std::size_t i = 0; i < gens_.size(); ++i) v = mulmod(v, powmod(gens_[i].g, exps[i], q_), q_);
    return v;
}

std::uint64_t CharacterGroup::value_exponent(std::span<const std::uint32_t> index, std::uint64_t n) const {
    const auto lg = log(n);
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < gens_.size(); ++i)
        k = (k + mulmod(static_cast<std::uint64_t>(index[i]) * lg[i] % gens_[i].order, weight_[i], exponent_)) %
            exponent_;
    return k;
}

std::string CharacterGroup::structure() const {
    if (gens_.empty()) return "C1";
    std::string s;
    for (const auto& g : gens_) {
        if (!s.empty()) s += " x ";
        s += "C" + std::to_string(g.order);
    }
    return s;
}

// ---- characters -------------------------------------------------------------

bool Character::principal() const {
    return std::all_of(index.begin(), index.end(), [](std::uint32_t e) { return e == 0; });
}

std::optional<RootOfUnity> Character::operator()(std::uint64_t n) const {
    if (!group->is_unit(n)) return std::nullopt;
    return RootOfUnity{group->value_exponent(index, n), group->exponent()};
}

Character Character::conj() const {
    Character c = *this;
    const auto& gens = group->generators();
    for (std::size_t i = 0; i < index.size(); ++i)
        c.index[i] = index[i] == 0 ? 0 : static_cast<std::uint32_t>(gens[i].order - index[i]);
    return c;
}

std::vector<Character> characters(const GroupPtr& group) {
    const auto& gens = group->generators();
    std::vector<Character> out;
    out.reserve(group->phi());
    std::vector<std::uint32_t> digits(gens.size(), 0);
    for (std::uint64_t count = 0; count < group->phi(); ++count) {
        out.push_back(Character{group, digits});
        for (std::size_t i = 0; i < gens.size(); ++i) {
            if (++digits[i] < gens[i].order) break;
            digits[i] = 0;
        }
    }
    return out;
}

Character principal_character(const GroupPtr& group) {
    return Character{group, std::vector<std::uint32_t>(group->generators().size(), 0)};
}

std::optional<RootOfUnity> evaluate_character(const Character& chi, std::uint64_t n) { return chi(n); }

// ---- twisted sums -----------------------------------------------------------

std::complex<double> psi_twisted_from_residues(std::span<const double> residues, const Character& chi) {
    const auto& g = *chi.group;
    std::vector<KahanSum> bins(g.exponent());
    for (std::uint64_t r = 0; r < g.q(); ++r)
        if (g.is_unit(r) && residues[r] != 0.0) bins[g.value_exponent(chi.index, r)] += residues[r];
    KahanSum re, im;
    for (std::size_t k = 0; k < bins.size(); ++k) {
        const double v = bins[k].value();
        if (v == 0.0) continue;
        const auto z = unit_root(k, bins.size()) * v;
        re += z.real();
        im += z.imag();
    }
    return {re.value(), im.value()};
}

std::vector<TwistedPsi> psi_twisted_trace(const PrimeTable& table, std::span<const std::uint64_t> grid,
                                          const Character& chi) {
    if (!grid.empty() && grid.back() > table.limit()) throw RangeError("psi_twisted: x exceeds table limit");
    const auto res = psi_residues(table, grid, chi.group->q());
    std::vector<TwistedPsi> out;
    for (std::size_t i = 0; i < grid.size(); ++i) out.push_back(TwistedPsi{grid[i], chi, psi_twisted_from_residues(res[i], chi)});
    return out;
}

std::complex<double> psi_twisted(const PrimeTable& table, std::uint64_t x, const Character& chi) {
    const std::uint64_t g[] = {x};
    return psi_twisted_trace(table, g, chi)[0].value;
}

std::vector<std::complex<double>> psi_twisted_all(const PrimeTable& table, std::uint64_t x, const GroupPtr& group) {
    if (x > table.limit()) throw RangeError("psi_twisted: x exceeds table limit");
    const std::uint64_t g[] = {x};
    const auto res = psi_residues(table, g, group->q());
    std::vector<std::complex<double>> out;
    for (const auto& chi : characters(group)) out.push_back(psi_twisted_from_residues(res[0], chi));
    return out;
}

std::complex<double> psi_ap_via_characters(const PrimeTable& table, std::uint64_t x, std::uint64_t q,
                                           std::uint64_t a) {
    if (q == 0 || std::gcd(a, q) != 1) throw UsageError("psi_ap_via_characters: need gcd(a, q) = 1");
    const auto group = character_group(q);
    const auto chars = characters(group);
    const auto twisted = psi_twisted_all(table, x, group);
    KahanSum re, im;
    for (std::size_t i = 0; i < chars.size(); ++i) {
        const auto z = chars[i](a)->conj().to_complex() * twisted[i];
        re += z.real();
        im += z.imag();
    }
    const double phi = static_cast<double>(group->phi());
    return {re.value() / phi, im.value() / phi};
}

ExactRootSum nonprincipal_character_sum(std::uint64_t q, std::uint64_t a) {
    if (q == 0 || std::gcd(a, q) != 1) throw UsageError("nonprincipal_character_sum: need gcd(a, q) = 1");
    const auto group = character_group(q);
    ExactRootSum sum(group->exponent());
    for (const auto& chi : characters(group))
        if (!chi.principal()) sum.add(chi(a)->conj());
    return sum;
}

}  // namespace primepairs
