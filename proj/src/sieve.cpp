#include "primepairs/sieve.hpp"

#include <cmath>
#include <limits>

#include "primepairs/parallel.hpp"
#include "primepairs/sweep.hpp"

namespace primepairs {

namespace {

constexpr std::uint64_t kBlockWords = 8;  // count_index granularity

// Presieve by 3, 5, 7, 11, 13. In bit-index space (n = 2i + 1) the pattern
// repeats every 15015 bits, so 15015 words hold a whole number of periods.
constexpr std::uint64_t kWheelPrimes[] = {3, 5, 7, 11, 13};
constexpr std::uint64_t kPatternWords = 3 * 5 * 7 * 11 * 13;

const std::vector<std::uint64_t>& wheel_pattern() {
    static const std::vector<std::uint64_t> pattern = [] {
        std::vector<std::uint64_t> w(kPatternWords, ~std::uint64_t{0});
        for (std::uint64_t p : kWheelPrimes) {
            // odd multiples of p: 2i+1 ≡ 0 (mod p)  <=>  i ≡ (p-1)/2 (mod p)
            for (std::uint64_t i = (p - 1) / 2; i < kPatternWords * 64; i += p)
                w[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
        }
        return w;
    }();
    return pattern;
}

std::uint64_t bits_for(std::uint64_t limit) { return (limit + 1) / 2; }

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

void require_increasing(std::span<const std::uint64_t> checkpoints) {
    for (std::size_t i = 1; i < checkpoints.size(); ++i)
        if (checkpoints[i] <= checkpoints[i - 1]) throw UsageError("checkpoints must be strictly increasing");
}

APClass APClass::make(std::uint64_t a, std::uint64_t q) {
    if (q == 0) throw UsageError("APClass: modulus must be >= 1");
    if (a < 1 || a > q) throw UsageError("APClass: residue must satisfy 1 <= a <= q");
    if (gcd_u64(a, q) != 1) throw UsageError("APClass: gcd(a, q) must be 1");
    return APClass{a, q};
}

void PrimeTable::finish() {
    const std::size_t blocks = (words_.size() + kBlockWords - 1) / kBlockWords;
    count_index_.assign(blocks + 1, 0);
    std::uint64_t running = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        count_index_[b] = running;
        const std::size_t end = std::min(words_.size(), (b + 1) * kBlockWords);
        for (std::size_t w = b * kBlockWords; w < end; ++w) running += std::popcount(words_[w]);
    }
    count_index_[blocks] = running;

    prime_powers_.clear();
    const std::uint64_t root = isqrt(limit_);
    for_each_prime(2, root, [&](std::uint64_t p) {
        std::uint64_t pw = p * p;
        for (;;) {
            prime_powers_.push_back({pw, p});
            if (pw > limit_ / p) break;
            pw *= p;
        }
    });
    std::erase_if(prime_powers_, [&](const PrimePower& pp) { return pp.n > limit_; });
    std::sort(prime_powers_.begin(), prime_powers_.end(),
              [](const PrimePower& x, const PrimePower& y) { return x.n < y.n; });
}

std::uint64_t PrimeTable::count_upto(std::uint64_t x) const {
    if (x > limit_) throw RangeError("prime_count: x exceeds table limit");
    if (x < 2) return 0;
    if (x < 3) return 1;
    const std::uint64_t end = ((x - 1) >> 1) + 1;  // bits [0, end)
    const std::uint64_t w_end = end >> 6;
    const std::uint64_t block = w_end / kBlockWords;
    std::uint64_t c = count_index_[block];
    for (std::uint64_t w = block * kBlockWords; w < w_end; ++w) c += std::popcount(words_[w]);
    if (end & 63) c += std::popcount(words_[w_end] & ((std::uint64_t{1} << (end & 63)) - 1));
    return c + 1;  // the prime 2
}

std::uint64_t PrimeTable::prime_power_base(std::uint64_t n) const {
    if (n > limit_) throw RangeError("prime_power_base: n exceeds table limit");
    if (n < 2) return 0;
    if (is_prime_unchecked(n)) return n;
    auto it = std::lower_bound(prime_powers_.begin(), prime_powers_.end(), n,
                               [](const PrimePower& pp, std::uint64_t v) { return pp.n < v; });
    return (it != prime_powers_.end() && it->n == n) ? it->base : 0;
}

double PrimeTable::von_mangoldt(std::uint64_t n) const {
    const std::uint64_t p = prime_power_base(n);
    return p ? std::log(static_cast<double>(p)) : 0.0;
}

PrimeTable build_prime_table(std::uint64_t limit, const SieveOptions& opts) {
    if (limit < 2 || limit > kMaxTableLimit) throw UsageError("build_prime_table: limit out of range [2, 2^40]");
    if (opts.segment_bits == 0 || opts.segment_bits % 64 != 0)
        throw UsageError("build_prime_table: segment size must be a positive multiple of 64 bits");

    PrimeTable t;
    t.limit_ = limit;
    const std::uint64_t nbits = bits_for(limit);
    const std::uint64_t nwords = (nbits + 63) / 64;
    t.words_.assign(nwords, 0);

    const auto base = small_primes(isqrt(limit));
    const auto& pattern = wheel_pattern();
    const std::uint64_t seg_words = opts.segment_bits / 64;
    const std::uint64_t nseg = (nwords + seg_words - 1) / seg_words;

    parallel_for(nseg, [&](std::size_t s) {
        const std::uint64_t w0 = s * seg_words;
        const std::uint64_t w1 = std::min(nwords, w0 + seg_words);
        std::uint64_t* words = t.words_.data();
        for (std::uint64_t w = w0; w < w1; ++w) words[w] = pattern[w % kPatternWords];

        const std::uint64_t i0 = w0 * 64;  // first bit index of segment
        const std::uint64_t i1 = w1 * 64;
        const std::uint64_t n_lo = 2 * i0 + 1;
        for (std::uint64_t p : base) {
            if (p < 17) continue;
            const std::uint64_t sq = p * p;
            if ((sq >> 1) >= i1) break;
            std::uint64_t start = sq;
            if (start < n_lo) {
                start = (n_lo + p - 1) / p * p;
                if ((start & 1) == 0) start += p;
            }
            for (std::uint64_t i = start >> 1; i < i1; i += p) words[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
        }
    });

    // fix-ups owned by no segment: 1 is not prime, wheel primes are
    t.words_[0] &= ~std::uint64_t{1};
    for (std::uint64_t p : kWheelPrimes)
        if (p <= limit) t.words_[0] |= std::uint64_t{1} << (p >> 1);
    if (nbits % 64) t.words_.back() &= (std::uint64_t{1} << (nbits % 64)) - 1;

    t.finish();
    return t;
}

PrimeTable build_prime_table_monolithic(std::uint64_t limit) {
    if (limit < 2 || limit > kMaxTableLimit) throw UsageError("build_prime_table: limit out of range [2, 2^40]");
    const std::uint64_t nbits = bits_for(limit);
    std::vector<std::uint8_t> odd(nbits, 1);
    odd[0] = 0;
    for (std::uint64_t i = 1; 2 * i + 1 <= limit / (2 * i + 1); ++i) {
        if (!odd[i]) continue;
        const std::uint64_t p = 2 * i + 1;
        for (std::uint64_t j = (p * p) >> 1; j < nbits; j += p) odd[j] = 0;
    }
    PrimeTable t;
    t.limit_ = limit;
    t.words_.assign((nbits + 63) / 64, 0);
    for (std::uint64_t i = 0; i < nbits; ++i)
        if (odd[i]) t.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    t.finish();
    return t;
}

std::uint64_t prime_count(const PrimeTable& table, std::uint64_t x) { return table.count_upto(x); }

APPrimes primes_in_ap(const PrimeTable& table, std::uint64_t x, APClass ap) {
    if (x > table.limit()) throw RangeError("primes_in_ap: x exceeds table limit");
    APPrimes out;
    const std::uint64_t r = ap.a % ap.q;
    table.for_each_prime(2, x, [&](std::uint64_t p) {
        if (p % ap.q == r) out.primes.push_back(p);
    });
    out.count = out.primes.size();
    return out;
}

std::optional<double> LeastPrime::observed_exponent(std::uint64_t q) const {
    if (!prime || q < 2) return std::nullopt;
    return std::log(static_cast<double>(*prime)) / std::log(static_cast<double>(q));
}

LeastPrime least_prime_in_ap(APClass ap, double cap_exponent, const PrimeTable* table) {
    ap = APClass::make(ap.a, ap.q);
    if (!(cap_exponent > 0)) throw UsageError("least_prime_in_ap: cap exponent must be positive");
    LeastPrime out;
    out.cap_exponent = cap_exponent;
    const long double bound = std::pow(static_cast<long double>(ap.q), static_cast<long double>(cap_exponent));
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    out.search_bound = static_cast<double>(std::min<long double>(bound, static_cast<long double>(kMax)));
    for (std::uint64_t n = ap.a; static_cast<long double>(n) < bound; n += ap.q) {
        const bool prime = (table && n <= table->limit()) ? table->is_prime_unchecked(n) : is_prime_u64(n);
        if (prime) {
            out.prime = n;
            break;
        }
        if (n > kMax - ap.q) break;
    }
    return out;
}

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
        a %= n;
        if (a == 0) continue;
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    if (limit < 2) return out;
    std::vector<std::uint8_t> mark(limit + 1, 1);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (!mark[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i) mark[j] = 0;
    }
    return out;
}

FactorSegment factor_segment(std::uint64_t lo, std::uint64_t hi, std::uint64_t max_window) {
    if (lo < 2 || hi <= lo) throw UsageError("factor_segment: need 2 <= lo < hi");
    return factor_segment(lo, hi, std::make_shared<const std::vector<std::uint64_t>>(small_primes(isqrt(hi - 1))),
                          max_window);
}

FactorSegment factor_segment(std::uint64_t lo, std::uint64_t hi,
                             std::shared_ptr<const std::vector<std::uint64_t>> base_primes,
                             std::uint64_t max_window) {
    if (lo < 2 || hi <= lo) throw UsageError("factor_segment: need 2 <= lo < hi");
    if (hi - lo > max_window) throw UsageError("factor_segment: window exceeds configured segment size");
    const std::uint64_t root = isqrt(hi - 1);
    if (!base_primes) throw UsageError("factor_segment: missing base primes");
    const std::uint64_t covered = base_primes->empty() ? 1 : base_primes->back();
    for (std::uint64_t n = covered + 1; n <= root; ++n)
        if (is_prime_u64(n)) throw UsageError("factor_segment: base primes do not reach sqrt(hi)");

    FactorSegment seg;
    seg.lo_ = lo;
    seg.hi_ = hi;
    seg.base_primes_ = std::move(base_primes);
    const std::size_t len = hi - lo;
    std::vector<std::uint64_t> rest(len);
    for (std::size_t i = 0; i < len; ++i) rest[i] = lo + i;
    seg.spf_.assign(len, 0);
    seg.remaining_.assign(len, 0);
    seg.mu_.assign(len, 1);
    seg.phi_.assign(len, 1);

    for (std::uint64_t p : *seg.base_primes_) {
        if (p > root) break;
        for (std::uint64_t n = (lo + p - 1) / p * p; n < hi; n += p) {
            const std::size_t i = n - lo;
            std::uint64_t pe = 1;
            unsigned e = 0;
            do {
                rest[i] /= p;
                pe *= p;
                ++e;
            } while (rest[i] % p == 0);
            if (seg.spf_[i] == 0) {
                seg.spf_[i] = p;
                seg.remaining_[i] = n / pe;
            }
            seg.mu_[i] = e > 1 ? 0 : static_cast<std::int8_t>(-seg.mu_[i]);
            seg.phi_[i] *= (pe / p) * (p - 1);
        }
    }
    for (std::size_t i = 0; i < len; ++i) {
        if (rest[i] > 1) {  // one prime factor above sqrt(hi)
            seg.mu_[i] = static_cast<std::int8_t>(-seg.mu_[i]);
            seg.phi_[i] *= rest[i] - 1;
        }
        if (seg.spf_[i] == 0) {
            seg.spf_[i] = lo + i;
            seg.remaining_[i] = 1;
        }
    }
    return seg;
}

std::vector<std::pair<std::uint64_t, unsigned>> FactorSegment::factor(std::uint64_t n) const {
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    std::uint64_t v = n;
    at(n);
    while (v > 1 && contains(v)) {
        const std::uint64_t p = spf(v);
        unsigned e = 0;
        for (std::uint64_t t = v; t % p == 0; t /= p) ++e;
        out.emplace_back(p, e);
        v = remaining(v);
    }
    if (v > 1) {
        const std::uint64_t from = out.empty() ? 2 : out.back().first + 1;
        for (std::uint64_t p : *base_primes_) {
            if (p < from) continue;
            if (p > v / p) break;
            if (v % p) continue;
            unsigned e = 0;
            while (v % p == 0) {
                v /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
        if (v > 1) out.emplace_back(v, 1u);
    }
    return out;
}

}  // namespace primepairs
