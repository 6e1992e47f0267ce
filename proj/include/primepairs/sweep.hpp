#pragma once

// Checkpointed sums over primes, split into fixed chunks of integers and run
// on the OpenMP team. Each chunk accumulates into per-checkpoint buckets; the
// buckets are merged in chunk order and prefix-summed, so every output is
// bit-for-bit independent of the worker count.

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "primepairs/common.hpp"
#include "primepairs/parallel.hpp"
#include "primepairs/sieve.hpp"

namespace primepairs {

inline void merge_into(KahanSum& into, const KahanSum& from) { into += from; }
inline void merge_into(std::uint64_t& into, std::uint64_t from) { into += from; }

/// Throws UsageError unless checkpoints are strictly increasing.
void require_increasing(std::span<const std::uint64_t> checkpoints);

/// For each checkpoint x_i, the vector of `width` accumulators holding
/// Σ_{p <= x_i} term(p). `term(p, acc)` adds prime p's contribution into acc
/// (a span of `width` accumulators). Primes are visited in [lo, x_last].
template <class Acc, class Term>
std::vector<std::vector<Acc>> sweep_primes(const PrimeTable& table, std::span<const std::uint64_t> checkpoints,
                                           std::size_t width, Term&& term, std::uint64_t lo = 2,
                                           std::uint64_t chunk = kSweepChunk) {
    require_increasing(checkpoints);
    const std::size_t nck = checkpoints.size();
    std::vector<std::vector<Acc>> out(nck, std::vector<Acc>(width));
    if (nck == 0) return out;
    const std::uint64_t x_max = checkpoints.back();
    if (x_max > table.limit()) throw RangeError("sweep: checkpoint exceeds table limit");
    lo = std::max<std::uint64_t>(lo, 2);
    if (x_max < lo) return out;

    struct Partial {
        std::size_t first_bucket = 0;
        std::vector<std::vector<Acc>> buckets;
    };
    const std::uint64_t span_len = x_max - lo + 1;
    const std::size_t nchunks = static_cast<std::size_t>((span_len + chunk - 1) / chunk);

    auto partials = parallel_map(nchunks, [&](std::size_t c) {
        Partial part;
        const std::uint64_t c_lo = lo + c * chunk;
        const std::uint64_t c_hi = std::min(x_max, c_lo + chunk - 1);
        std::size_t b = static_cast<std::size_t>(
            std::lower_bound(checkpoints.begin(), checkpoints.end(), c_lo) - checkpoints.begin());
        part.first_bucket = b;
        part.buckets.emplace_back(width);
        table.for_each_prime(c_lo, c_hi, [&](std::uint64_t p) {
            while (checkpoints[b] < p) {
                ++b;
                part.buckets.emplace_back(width);
            }
            term(p, std::span<Acc>(part.buckets.back()));
        });
        return part;
    });

    std::vector<std::vector<Acc>> buckets(nck, std::vector<Acc>(width));
    for (const Partial& part : partials)
        for (std::size_t j = 0; j < part.buckets.size(); ++j)
            for (std::size_t w = 0; w < width; ++w) merge_into(buckets[part.first_bucket + j][w], part.buckets[j][w]);

    for (std::size_t i = 0; i < nck; ++i)
        for (std::size_t w = 0; w < width; ++w) {
            if (i > 0) merge_into(out[i][w], out[i - 1][w]);
            merge_into(out[i][w], buckets[i][w]);
        }
    return out;
}

/// Scalar convenience: one Kahan accumulator per checkpoint.
template <class Term>
std::vector<double> sweep_primes_sum(const PrimeTable& table, std::span<const std::uint64_t> checkpoints,
                                     Term&& term, std::uint64_t lo = 2) {
    auto raw = sweep_primes<KahanSum>(
        table, checkpoints, 1, [&](std::uint64_t p, std::span<KahanSum> acc) { acc[0] += term(p); }, lo);
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i][0].value();
    return out;
}

/// Scalar count: number of primes in [lo, x_i] satisfying pred.
template <class Pred>
std::vector<std::uint64_t> sweep_primes_count(const PrimeTable& table, std::span<const std::uint64_t> checkpoints,
                                              Pred&& pred, std::uint64_t lo = 2) {
    auto raw = sweep_primes<std::uint64_t>(
        table, checkpoints, 1, [&](std::uint64_t p, std::span<std::uint64_t> acc) { acc[0] += pred(p) ? 1 : 0; },
        lo);
    std::vector<std::uint64_t> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i][0];
    return out;
}

/// Adds f(n, base) for every proper prime power n = base^v (v >= 2),
/// n <= x, into the checkpoint bucket of n, in ascending n. Serial: there are
/// only O(sqrt(x)) such n. `values` holds per-checkpoint cumulative sums and
/// is updated in place.
template <class F>
void add_prime_power_terms(const PrimeTable& table, std::span<const std::uint64_t> checkpoints,
                           std::vector<std::vector<KahanSum>>& values, F&& f) {
    if (checkpoints.empty()) return;
    const std::uint64_t x_max = checkpoints.back();
    std::vector<std::vector<KahanSum>> bucket(values.size(), std::vector<KahanSum>(values.empty() ? 0 : values[0].size()));
    std::size_t b = 0;
    for (const PrimePower& pp : table.proper_prime_powers()) {
        if (pp.n > x_max) break;
        while (checkpoints[b] < pp.n) ++b;
        f(pp.n, pp.base, std::span<KahanSum>(bucket[b]));
    }
    for (std::size_t w = 0; w < (values.empty() ? 0 : values[0].size()); ++w) {
        KahanSum running;
        for (std::size_t i = 0; i < values.size(); ++i) {
            running += bucket[i][w];
            values[i][w] += running;
        }
    }
}

}  // namespace primepairs
