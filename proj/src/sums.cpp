#include "primepairs/sums.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "primepairs/arith.hpp"
#include "primepairs/asymptotic.hpp"
#include "primepairs/parallel.hpp"
#include "primepairs/sweep.hpp"

namespace primepairs {

namespace {

constexpr std::uint64_t kMobiusWindow = std::uint64_t{1} << 18;
constexpr std::uint64_t kDivisorBlock = std::uint64_t{1} << 16;

double dlog(std::uint64_t v) { return std::log(static_cast<double>(v)); }
double dval(std::uint64_t v) { return static_cast<double>(v); }

void require_within(const PrimeTable& table, std::uint64_t x, const char* what) {
    if (x > table.limit()) throw RangeError(std::string(what) + ": x exceeds table limit");
}

void require_form_within(const PrimeTable& table, std::uint64_t x, const LinearForm& form, const char* what) {
    if (required_limit(x, form) > table.limit())
        throw RangeError(std::string(what) + ": m*x+k exceeds table limit " + std::to_string(table.limit()));
}

/// Λ(m p + k) using the table; 0 when the image is < 2.
double lambda_image(const PrimeTable& table, const LinearForm& form, std::uint64_t p) {
    const std::uint64_t n = form.image(p);
    if (n < 2) return 0.0;
    if (table.is_prime_unchecked(n)) return dlog(n);
    const std::uint64_t b = table.prime_power_base(n);
    return b ? dlog(b) : 0.0;
}

SumTrace make_trace(std::string op, std::span<const std::uint64_t> grid, const std::vector<double>& values) {
    SumTrace t;
    t.operation = std::move(op);
    t.points.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) t.points.push_back(TracePoint{dval(grid[i]), values[i], {}, {}});
    return t;
}

void add_form_meta(SumTrace& t, const LinearForm& form) {
    t.params.emplace_back("m", std::to_string(form.m));
    t.params.emplace_back("k", std::to_string(form.k));
    if (auto w = form.parity_warning()) t.warnings.push_back(*w);
}

std::uint64_t totient(std::uint64_t q) { return evaluate(q).phi; }

std::vector<std::uint64_t> single(std::uint64_t x) { return {x}; }

/// Sum of f(segment, n) over 2 <= n <= checkpoint, for every checkpoint, in
/// fixed windows reduced in window order.
/// μ(n) for n in [lo, hi), base = primes up to sqrt(hi). The product of the
/// sieved primes falls short of a squarefree n exactly when one larger prime
/// remains.
std::vector<std::int8_t> mobius_window(std::uint64_t lo, std::uint64_t hi, const std::vector<std::uint64_t>& base) {
    const std::size_t len = hi - lo;
    std::vector<std::int8_t> mu(len, 1);
    std::vector<std::uint64_t> prod(len, 1);
    for (std::uint64_t p : base) {
        if (p >= hi) break;
        for (std::uint64_t n = (lo + p - 1) / p * p; n < hi; n += p) {
            mu[n - lo] = static_cast<std::int8_t>(-mu[n - lo]);
            prod[n - lo] *= p;
        }
        const std::uint64_t pp = p * p;
        if (pp < hi)
            for (std::uint64_t n = (lo + pp - 1) / pp * pp; n < hi; n += pp) mu[n - lo] = 0;
    }
    for (std::size_t i = 0; i < len; ++i)
        if (mu[i] && prod[i] != lo + i) mu[i] = static_cast<std::int8_t>(-mu[i]);
    return mu;
}

template <class F>
std::vector<double> sweep_factor_windows(std::span<const std::uint64_t> checkpoints, F&& f) {
    require_increasing(checkpoints);
    std::vector<double> out(checkpoints.size(), 0.0);
    if (checkpoints.empty() || checkpoints.back() < 2) return out;
    const std::uint64_t x_max = checkpoints.back();
    auto base = std::make_shared<const std::vector<std::uint64_t>>(small_primes(isqrt(x_max)));
    const std::size_t nwin = static_cast<std::size_t>((x_max - 1 + kMobiusWindow - 1) / kMobiusWindow);

    struct Partial {
        std::size_t first = 0;
        std::vector<KahanSum> buckets;
    };
    auto parts = parallel_map(nwin, [&](std::size_t w) {
        Partial part;
        const std::uint64_t lo = 2 + w * kMobiusWindow;
        const std::uint64_t hi = std::min(x_max + 1, lo + kMobiusWindow);
        const auto mu = mobius_window(lo, hi, *base);
        std::size_t b = static_cast<std::size_t>(
            std::lower_bound(checkpoints.begin(), checkpoints.end(), lo) - checkpoints.begin());
        part.first = b;
        part.buckets.emplace_back();
        for (std::uint64_t n = lo; n < hi; ++n) {
            while (checkpoints[b] < n) {
                ++b;
                part.buckets.emplace_back();
            }
            const int m = mu[n - lo];
            const double v = m ? f(m, n) : 0.0;
            if (v != 0.0) part.buckets.back() += v;
        }
        return part;
    });
    std::vector<KahanSum> buckets(checkpoints.size());
    for (const auto& part : parts)
        for (std::size_t j = 0; j < part.buckets.size(); ++j) buckets[part.first + j] += part.buckets[j];
    KahanSum running;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        running += buckets[i];
        out[i] = running.value();
    }
    return out;
}

/// Σ Λ(n) g(n) over prime powers n <= checkpoint.
template <class G>
std::vector<double> sweep_prime_powers(const PrimeTable& table, std::span<const std::uint64_t> grid, G&& g) {
    auto raw = sweep_primes<KahanSum>(table, grid, 1,
                                      [&](std::uint64_t p, std::span<KahanSum> acc) { acc[0] += dlog(p) * g(p); });
    add_prime_power_terms(table, grid, raw, [&](std::uint64_t n, std::uint64_t base, std::span<KahanSum> acc) {
        acc[0] += dlog(base) * g(n);
    });
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i][0].value();
    return out;
}

}  // namespace

std::uint64_t required_limit(std::uint64_t x, const LinearForm& form) { return std::max(x, form.image(x)); }

// ---- residue classes ------------------------------------------------------

SumTrace mertens_ap_trace(const PrimeTable& table, std::span<const std::uint64_t> grid, APClass ap,
                          PrimeWeight weight) {
    ap = APClass::make(ap.a, ap.q);
    if (!grid.empty()) require_within(table, grid.back(), "mertens_ap");
    const std::uint64_t r = ap.a % ap.q;
    auto values = sweep_primes_sum(table, grid, [&](std::uint64_t p) {
        if (p % ap.q != r) return 0.0;
        return weight == PrimeWeight::Reciprocal ? 1.0 / dval(p) : dlog(p) / dval(p);
    });
    SumTrace t = make_trace(weight == PrimeWeight::Reciprocal ? "mertens-ap-reciprocal" : "mertens-ap-log", grid,
                            values);
    t.params.emplace_back("q", std::to_string(ap.q));
    t.params.emplace_back("a", std::to_string(ap.a));
    if (weight == PrimeWeight::Reciprocal) {
        const auto lp = least_prime_in_ap(ap, 6.0, &table);
        const double phi = dval(totient(ap.q));
        if (lp.prime) {
            for (auto& pt : t.points) {
                if (pt.x < 2) continue;
                pt.main = std::log(std::log(pt.x)) / phi + 1.0 / dval(*lp.prime);
                pt.residual = pt.value - *pt.main;
            }
        } else {
            t.warnings.push_back("least prime of the class not found below q^6; main term omitted");
        }
    }
    return t;
}

MertensResult mertens_ap(const PrimeTable& table, std::uint64_t x, APClass ap, PrimeWeight weight) {
    const auto g = single(x);
    auto t = mertens_ap_trace(table, g, ap, weight);
    MertensResult r;
    r.value = t.points[0].value;
    r.main = t.points[0].main;
    r.residual = t.points[0].residual;
    if (weight == PrimeWeight::Reciprocal) r.least_prime = least_prime_in_ap(APClass::make(ap.a, ap.q), 6.0, &table).prime;
    return r;
}

std::vector<std::vector<double>> class_sums(const PrimeTable& table, std::span<const std::uint64_t> grid,
                                            std::uint64_t q, PrimeWeight weight) {
    if (q == 0) throw UsageError("class_sums: q must be >= 1");
    if (!grid.empty()) require_within(table, grid.back(), "class_sums");
    auto raw = sweep_primes<KahanSum>(table, grid, q, [&](std::uint64_t p, std::span<KahanSum> acc) {
        acc[p % q] += weight == PrimeWeight::Reciprocal ? 1.0 / dval(p) : dlog(p) / dval(p);
    });
    std::vector<std::vector<double>> out(raw.size(), std::vector<double>(q));
    for (std::size_t i = 0; i < raw.size(); ++i)
        for (std::uint64_t r = 0; r < q; ++r) out[i][r] = raw[i][r].value();
    return out;
}

std::vector<std::vector<double>> psi_residues(const PrimeTable& table, std::span<const std::uint64_t> grid,
                                              std::uint64_t q) {
    if (q == 0) throw UsageError("psi_residues: q must be >= 1");
    if (!grid.empty()) require_within(table, grid.back(), "psi_residues");
    auto raw = sweep_primes<KahanSum>(table, grid, q,
                                      [&](std::uint64_t p, std::span<KahanSum> acc) { acc[p % q] += dlog(p); });
    add_prime_power_terms(table, grid, raw, [&](std::uint64_t n, std::uint64_t base, std::span<KahanSum> acc) {
        acc[n % q] += dlog(base);
    });
    std::vector<std::vector<double>> out(raw.size(), std::vector<double>(q));
    for (std::size_t i = 0; i < raw.size(); ++i)
        for (std::uint64_t r = 0; r < q; ++r) out[i][r] = raw[i][r].value();
    return out;
}

double psi_ap(const PrimeTable& table, std::uint64_t x, std::uint64_t q, std::uint64_t a) {
    const APClass ap = APClass::make(a % q == 0 ? q : a % q, q);
    require_within(table, x, "psi_ap");
    const std::uint64_t r = ap.a % q;
    const auto g = single(x);
    return sweep_prime_powers(table, g, [&](std::uint64_t n) { return n % q == r ? 1.0 : 0.0; })[0];
}

std::uint64_t pi_ap(const PrimeTable& table, std::uint64_t x, std::uint64_t q, std::uint64_t a) {
    const APClass ap = APClass::make(a % q == 0 ? q : a % q, q);
    require_within(table, x, "pi_ap");
    const std::uint64_t r = ap.a % q;
    const auto g = single(x);
    return sweep_primes_count(table, g, [&](std::uint64_t p) { return p % q == r; })[0];
}

double psi(const PrimeTable& table, std::uint64_t x) {
    require_within(table, x, "psi");
    const auto g = single(x);
    return sweep_prime_powers(table, g, [](std::uint64_t) { return 1.0; })[0];
}

std::vector<double> lambda_dirichlet_partial(const PrimeTable& table, std::span<const std::uint64_t> grid,
                                             double sigma) {
    if (!grid.empty()) require_within(table, grid.back(), "lambda_dirichlet_partial");
    return sweep_prime_powers(table, grid, [&](std::uint64_t n) { return std::exp(-sigma * dlog(n)); });
}

// ---- linear forms -----------------------------------------------------------

SumTrace pair_weighted_trace(const PrimeTable& table, std::span<const std::uint64_t> grid, const LinearForm& form) {
    if (!grid.empty()) require_form_within(table, grid.back(), form, "pair_weighted_sum");
    auto values =
        sweep_primes_sum(table, grid, [&](std::uint64_t p) { return lambda_image(table, form, p) / dval(p); });
    SumTrace t = make_trace("pair-weighted", grid, values);
    add_form_meta(t, form);
    return t;
}

FormSum pair_weighted_sum(const PrimeTable& table, std::uint64_t x, const LinearForm& form) {
    const auto g = single(x);
    return FormSum{pair_weighted_trace(table, g, form).points[0].value, form.parity_warning()};
}

double pair_weighted_sum_excluding_k_divisors(const PrimeTable& table, std::uint64_t x, const LinearForm& form) {
    require_form_within(table, x, form, "pair_weighted_sum");
    const auto g = single(x);
    const auto ak = static_cast<std::uint64_t>(form.k < 0 ? -form.k : form.k);
    return sweep_primes_sum(table, g, [&](std::uint64_t p) {
        if (ak % p == 0) return 0.0;
        return lambda_image(table, form, p) / dval(p);
    })[0];
}

namespace {

struct InversionPass {
    std::vector<KahanSum> buckets;        // per checkpoint (only for traces)
    std::vector<InversionTerm> ledger;    // per d (only for single x)
};

InversionPass run_inversion(const PrimeTable& table, std::span<const std::uint64_t> checkpoints,
                            const LinearForm& form, InversionOptions options, bool want_ledger) {
    require_increasing(checkpoints);
    InversionPass out;
    out.buckets.resize(checkpoints.size());
    if (checkpoints.empty()) return out;
    const std::uint64_t x = checkpoints.back();
    require_form_within(table, x, form, "inversion_decomposition");
    const std::uint64_t d_max = form.image(x);
    if (d_max < 2 || x < 2) return out;

    const auto m = static_cast<std::uint64_t>(form.m);
    const auto ak = static_cast<std::uint64_t>(form.k < 0 ? -form.k : form.k);
    auto base = std::make_shared<const std::vector<std::uint64_t>>(small_primes(isqrt(d_max)));
    const std::size_t nblocks = static_cast<std::size_t>((d_max - 1 + kDivisorBlock - 1) / kDivisorBlock);

    auto parts = parallel_map(nblocks, [&](std::size_t blk) {
        InversionPass part;
        part.buckets.resize(want_ledger ? 0 : checkpoints.size());
        const std::uint64_t lo = 2 + blk * kDivisorBlock;
        const std::uint64_t hi = std::min(d_max + 1, lo + kDivisorBlock);
        auto seg = factor_segment(lo, hi, base, kDivisorBlock);
        for (std::uint64_t d = lo; d < hi; ++d) {
            const int mu = seg.mu(d);
            if (mu == 0) continue;
            // d | m p + k has no solution when gcd(d, m) > 1 because gcd(m, k) = 1
            if (gcd_u64(d, m) != 1) continue;
            if (options.restricted && gcd_u64(d, ak) != 1) continue;
            const std::uint64_t minv = inverse_mod(m % d, d);
            const std::uint64_t kmod = static_cast<std::uint64_t>(((form.k % static_cast<std::int64_t>(d)) +
                                                                   static_cast<std::int64_t>(d)) %
                                                                  static_cast<std::int64_t>(d));
            const std::uint64_t r = static_cast<std::uint64_t>(
                static_cast<unsigned __int128>((d - kmod) % d) * minv % d);
            const double weight = -mu * dlog(d);
            KahanSum inner;
            for (std::uint64_t p = r; p <= x; p += d) {
                if (p < 2 || !table.is_prime_unchecked(p)) continue;
                if (form.image(p) < 2) continue;
                if (options.exclude_primes_dividing_k && ak % p == 0) continue;
                if (want_ledger) {
                    inner += 1.0 / dval(p);
                } else {
                    const auto b = static_cast<std::size_t>(
                        std::lower_bound(checkpoints.begin(), checkpoints.end(), p) - checkpoints.begin());
                    part.buckets[b] += weight / dval(p);
                }
            }
            if (want_ledger && inner.value() != 0.0) part.ledger.push_back(InversionTerm{d, mu, inner.value()});
        }
        return part;
    });
    for (auto& part : parts) {
        if (want_ledger) {
            out.ledger.insert(out.ledger.end(), part.ledger.begin(), part.ledger.end());
        } else {
            for (std::size_t i = 0; i < checkpoints.size(); ++i) out.buckets[i] += part.buckets[i];
        }
    }
    return out;
}

}  // namespace

InversionResult inversion_decomposition(const PrimeTable& table, std::uint64_t x, const LinearForm& form,
                                        InversionOptions options) {
    const auto g = single(x);
    auto pass = run_inversion(table, g, form, options, true);
    InversionResult r;
    r.ledger = std::move(pass.ledger);
    KahanSum v;
    for (const auto& t : r.ledger) v += -t.mu * dlog(t.d) * t.inner;
    r.value = v.value();
    r.warning = form.parity_warning();
    return r;
}

std::vector<double> inversion_decomposition_trace(const PrimeTable& table, std::span<const std::uint64_t> checkpoints,
                                                  const LinearForm& form, InversionOptions options) {
    auto pass = run_inversion(table, checkpoints, form, options, false);
    std::vector<double> out(checkpoints.size());
    KahanSum running;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        running += pass.buckets[i];
        out[i] = running.value();
    }
    return out;
}

SumTrace prime_power_pair_trace(const PrimeTable& table, std::span<const std::uint64_t> grid, const LinearForm& form,
                                PairWeight weight) {
    require_increasing(grid);
    SumTrace t;
    t.operation = weight == PairWeight::Reciprocal ? "prime-power-pair-reciprocal" : "prime-power-pair";
    add_form_meta(t, form);
    if (grid.empty()) return t;
    const std::uint64_t x = grid.back();
    require_form_within(table, x, form, "prime_power_pair_sum");
    std::vector<KahanSum> buckets(grid.size());
    const std::uint64_t n_max = form.image(x);
    const auto m = static_cast<std::uint64_t>(form.m);
    std::size_t b = 0;
    // prime powers ascend, and so do the p they come from
    for (const PrimePower& pp : table.proper_prime_powers()) {
        if (pp.n > n_max) break;
        const __int128 diff = static_cast<__int128>(pp.n) - form.k;
        if (diff <= 0 || diff % m != 0) continue;
        const auto p = static_cast<std::uint64_t>(diff / m);
        if (p > x || !table.is_prime_unchecked(p)) continue;
        while (grid[b] < p) ++b;
        buckets[b] += weight == PairWeight::Reciprocal ? dlog(pp.base) / dval(p) : dlog(pp.base);
    }
    KahanSum running;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        running += buckets[i];
        t.points.push_back(TracePoint{dval(grid[i]), running.value(), {}, {}});
    }
    return t;
}

FormSum prime_power_pair_sum(const PrimeTable& table, std::uint64_t x, const LinearForm& form, PairWeight weight,
                             std::optional<std::uint64_t> tail_from) {
    if (tail_from && *tail_from >= x) {
        require_form_within(table, x, form, "prime_power_pair_sum");
        return FormSum{0.0, form.parity_warning()};
    }
    std::vector<std::uint64_t> g;
    if (tail_from && *tail_from >= 1) g.push_back(*tail_from);
    g.push_back(x);
    auto t = prime_power_pair_trace(table, g, form, weight);
    const double total = t.points.back().value;
    const double head = g.size() == 2 ? t.points.front().value : 0.0;
    return FormSum{total - head, form.parity_warning()};
}

SumTrace lambda_pair_trace(const PrimeTable& table, std::span<const std::uint64_t> grid, const LinearForm& form) {
    if (!grid.empty()) require_form_within(table, grid.back(), form, "lambda_pair_sum");
    auto values = sweep_primes_sum(table, grid, [&](std::uint64_t p) { return lambda_image(table, form, p); });
    SumTrace t = make_trace("lambda-pair", grid, values);
    add_form_meta(t, form);
    for (auto& pt : t.points) {
        if (pt.x < 2) continue;
        pt.main = log_integral(pt.x);
        pt.residual = pt.value - *pt.main;
    }
    return t;
}

FormSum lambda_pair_sum(const PrimeTable& table, std::uint64_t x, const LinearForm& form) {
    const auto g = single(x);
    return FormSum{lambda_pair_trace(table, g, form).points[0].value, form.parity_warning()};
}

SumTrace pair_count_trace(const PrimeTable& table, std::span<const std::uint64_t> grid, const LinearForm& form) {
    require_increasing(grid);
    if (!grid.empty()) require_within(table, grid.back(), "pair_count");
    std::vector<std::uint64_t> buckets(grid.size(), 0);
    if (!grid.empty()) {
        const std::uint64_t x = grid.back();
        // p counts from checkpoint max(p, m p + k) on; that key is not
        // monotone in p when k < 0, so bucket by lookup
        const std::size_t nchunks = static_cast<std::size_t>((x + kSweepChunk - 1) / kSweepChunk);
        auto partial = parallel_map(nchunks, [&](std::size_t c) {
            std::vector<std::uint64_t> local(grid.size(), 0);
            const std::uint64_t lo = std::max<std::uint64_t>(2, c * kSweepChunk);
            const std::uint64_t hi = std::min(x, (c + 1) * kSweepChunk - 1);
            if (lo > hi) return local;
            table.for_each_prime(lo, hi, [&](std::uint64_t p) {
                const std::uint64_t n = form.image(p);
                if (n < 2 || n > x || !table.is_prime_unchecked(n)) return;
                const std::uint64_t key = std::max(p, n);
                const auto b = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), key) - grid.begin());
                ++local[b];
            });
            return local;
        });
        for (const auto& local : partial)
            for (std::size_t i = 0; i < grid.size(); ++i) buckets[i] += local[i];
    }
    SumTrace t;
    t.operation = "pair-count";
    add_form_meta(t, form);
    std::uint64_t running = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        running += buckets[i];
        t.points.push_back(TracePoint{dval(grid[i]), dval(running), {}, {}});
    }
    return t;
}

std::uint64_t pair_count(const PrimeTable& table, std::uint64_t x, const LinearForm& form) {
    const auto g = single(x);
    return static_cast<std::uint64_t>(pair_count_trace(table, g, form).points[0].value);
}

FormSum hl_partial_sum(const PrimeTable& table, std::uint64_t x, double s, const LinearForm& form) {
    if (!(s >= 1)) throw UsageError("hl_partial_sum: s must be real and >= 1");
    require_form_within(table, x, form, "hl_partial_sum");
    const auto g = single(x);
    auto v = sweep_prime_powers(table, g, [&](std::uint64_t n) {
        const double l = lambda_image(table, form, n);
        return l == 0.0 ? 0.0 : l * std::exp(-s * dlog(n));
    });
    return FormSum{v[0], form.parity_warning()};
}

TailSplit chebyshev_tail(const PrimeTable& table, std::uint64_t x0, std::uint64_t x, const LinearForm& form) {
    if (x0 > x) throw UsageError("chebyshev_tail: need x0 <= x");
    require_form_within(table, x, form, "chebyshev_tail");
    TailSplit out;
    out.warning = form.parity_warning();
    if (x0 == x) return out;
    const auto g = single(x);
    auto raw = sweep_primes<KahanSum>(
        table, g, 2,
        [&](std::uint64_t p, std::span<KahanSum> acc) {
            const std::uint64_t n = form.image(p);
            if (n < 2) return;
            if (table.is_prime_unchecked(n)) {
                acc[0] += dlog(n) / dval(p);
            } else if (const std::uint64_t b = table.prime_power_base(n)) {
                acc[1] += dlog(b) / dval(p);
            }
        },
        x0 + 1);
    out.pair_part = raw[0][0].value();
    out.power_part = raw[0][1].value();
    KahanSum total;
    total += out.pair_part;
    total += out.power_part;
    out.total = total.value();
    return out;
}

// ---- Möbius sums ------------------------------------------------------------

MobiusFilter MobiusFilter::coprime_to(std::uint64_t q) {
    if (q == 0) throw UsageError("mobius filter: q must be >= 1");
    return MobiusFilter{Kind::CoprimeTo, q, 0};
}

MobiusFilter MobiusFilter::residue(std::uint64_t a, std::uint64_t q) {
    const APClass ap = APClass::make(a, q);
    return MobiusFilter{Kind::Residue, ap.q, ap.a % ap.q};
}

bool MobiusFilter::accepts(std::uint64_t n) const {
    switch (kind) {
        case Kind::None: return true;
        case Kind::CoprimeTo: return gcd_u64(n, q) == 1;
        case Kind::Residue: return n % q == a;
    }
    return true;
}

std::string MobiusFilter::label() const {
    switch (kind) {
        case Kind::None: return "none";
        case Kind::CoprimeTo: return "coprime:" + std::to_string(q);
        case Kind::Residue: return "residue:" + std::to_string(a == 0 ? q : a) + ":" + std::to_string(q);
    }
    return "none";
}

SumTrace twisted_mobius_trace(std::span<const std::uint64_t> grid, double s, int log_power, MobiusFilter filter) {
    if (log_power != 1 && log_power != 2) throw UsageError("twisted_mobius_sum: log power must be 1 or 2");
    if (!(s >= 0.5 && s <= 4.0)) throw UsageError("twisted_mobius_sum: s must be in [1/2, 4]");
    auto values = sweep_factor_windows(grid, [&](int mu, std::uint64_t n) {
        if (!filter.accepts(n)) return 0.0;
        const double l = dlog(n);
        const double lp = log_power == 1 ? l : l * l;
        double scale;
        if (s == 1.0)
            scale = 1.0 / dval(n);
        else if (s == 2.0)
            scale = 1.0 / (dval(n) * dval(n));
        else if (s == 0.5)
            scale = 1.0 / std::sqrt(dval(n));
        else
            scale = std::exp(-s * l);
        return mu * lp * scale;
    });
    SumTrace t = make_trace("twisted-mobius", grid, values);
    t.params.emplace_back("s", format_g12(s));
    t.params.emplace_back("log_power", std::to_string(log_power));
    t.params.emplace_back("condition", filter.label());
    if (log_power == 1 && filter.kind == MobiusFilter::Kind::None && s >= 1.0) {
        const double target = s == 1.0 ? -1.0 : zeta_and_deriv(s).mobius_log_target();
        for (auto& pt : t.points) {
            pt.main = target;
            pt.residual = pt.value - target;
        }
    }
    return t;
}

TwistedMobiusResult twisted_mobius_sum(std::uint64_t x, double s, int log_power, MobiusFilter filter) {
    if (x == 0) throw UsageError("twisted_mobius_sum: x must be >= 1");
    const auto g = single(x);
    auto t = twisted_mobius_trace(g, s, log_power, filter);
    return TwistedMobiusResult{t.points[0].value, t.points[0].main, t.points[0].residual};
}

}  // namespace primepairs
