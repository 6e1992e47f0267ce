#include "primepairs/arith.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "primepairs/common.hpp"
#include "primepairs/parallel.hpp"
#include "primepairs/sieve.hpp"

namespace primepairs {

namespace {

constexpr double kLogTolerancePerTerm = 1e-9;
constexpr std::uint64_t kSuiteWindow = std::uint64_t{1} << 16;

double log_u64(std::uint64_t v) { return std::log(static_cast<double>(v)); }

int mu_of(const std::vector<unsigned>& exps) {
    int s = 1;
    for (unsigned e : exps) {
        if (e > 1) return 0;
        if (e == 1) s = -s;
    }
    return s;
}

}  // namespace

Factorization factorize(std::uint64_t n) {
    if (n == 0) throw UsageError("factorize: n must be >= 1");
    Factorization f;
    auto take = [&](std::uint64_t p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) f.emplace_back(p, e);
    };
    take(2);
    take(3);
    for (std::uint64_t d = 5; d <= n / d; d += 6) {
        take(d);
        take(d + 2);
    }
    if (n > 1) f.emplace_back(n, 1u);
    return f;
}

ArithValue from_factorization(std::uint64_t n, const Factorization& f) {
    ArithValue v;
    v.n = n;
    v.mu = 1;
    v.phi = 1;
    for (auto [p, e] : f) {
        v.mu = e > 1 ? 0 : -v.mu;
        std::uint64_t pe = 1;
        for (unsigned i = 1; i < e; ++i) pe *= p;
        v.phi *= pe * (p - 1);
    }
    v.lambda = f.size() == 1 ? log_u64(f[0].first) : 0.0;
    return v;
}

ArithValue evaluate(std::uint64_t n) {
    if (n == 0) throw UsageError("evaluate: n must be >= 1");
    return from_factorization(n, factorize(n));
}

std::vector<ArithValue> evaluate_range(std::uint64_t lo, std::uint64_t hi) {
    if (lo == 0 || hi <= lo) throw UsageError("evaluate_range: need 1 <= lo < hi");
    std::vector<ArithValue> out;
    out.reserve(hi - lo);
    if (lo == 1) {
        out.push_back(ArithValue{});
        ++lo;
    }
    if (lo >= hi) return out;
    auto base = std::make_shared<const std::vector<std::uint64_t>>(small_primes(isqrt(hi - 1)));
    for (std::uint64_t w = lo; w < hi; w += kDefaultFactorWindow) {
        const std::uint64_t w_hi = std::min(hi, w + kDefaultFactorWindow);
        auto seg = factor_segment(w, w_hi, base);
        for (std::uint64_t n = w; n < w_hi; ++n) {
            const std::uint64_t p = seg.prime_power_base(n);
            out.push_back(ArithValue{n, seg.mu(n), p ? log_u64(p) : 0.0, seg.phi(n)});
        }
    }
    return out;
}

std::vector<Divisor> divisors(const Factorization& f) {
    std::vector<Divisor> out{{1, std::vector<unsigned>(f.size(), 0)}};
    // extend from the last prime backwards so the first prime varies slowest
    for (std::size_t k = f.size(); k-- > 0;) {
        std::vector<Divisor> next;
        next.reserve(out.size() * (f[k].second + 1));
        std::uint64_t pe = 1;
        for (unsigned e = 0; e <= f[k].second; ++e, pe *= f[k].first)
            for (const Divisor& d : out) {
                Divisor nd = d;
                nd.d *= pe;
                nd.exponents[k] = e;
                next.push_back(std::move(nd));
            }
        out = std::move(next);
    }
    return out;
}

double vonmangoldt_via_divisors(std::uint64_t n) {
    if (n == 0) throw UsageError("vonmangoldt_via_divisors: n must be >= 1");
    KahanSum s;
    for (const Divisor& d : divisors(factorize(n))) {
        const int m = mu_of(d.exponents);
        if (m != 0) s += -m * log_u64(d.d);
    }
    return s.value();
}

DivisorIdentityReport divisor_identity_suite(std::uint64_t n_max) {
    if (n_max == 0) throw UsageError("divisor_identity_suite: n_max must be >= 1");
    DivisorIdentityReport rep;
    rep.n_max = n_max;
    auto base = std::make_shared<const std::vector<std::uint64_t>>(small_primes(isqrt(n_max)));

    auto check_n = [](std::uint64_t n, const Factorization& f, DivisorIdentityReport& r) {
        KahanSum lam;
        long long mu_sum = 0;
        std::uint64_t phi_sum = 0;
        const auto ds = divisors(f);
        for (const Divisor& d : ds) {
            std::size_t nonzero = 0, which = 0;
            for (std::size_t i = 0; i < d.exponents.size(); ++i)
                if (d.exponents[i]) {
                    ++nonzero;
                    which = i;
                }
            if (nonzero == 1) lam += log_u64(f[which].first);
            mu_sum += mu_of(d.exponents);
            std::uint64_t ph = 1;
            for (std::size_t i = 0; i < f.size(); ++i)
                if (d.exponents[i]) {
                    std::uint64_t pe = 1;
                    for (unsigned e = 1; e < d.exponents[i]; ++e) pe *= f[i].first;
                    ph *= pe * (f[i].first - 1);
                }
            phi_sum += ph;
        }
        const double dev = std::abs(lam.value() - log_u64(n));
        if (dev > r.max_log_deviation) {
            r.max_log_deviation = dev;
            r.worst_n = n;
        }
        if (dev > kLogTolerancePerTerm * static_cast<double>(ds.size())) r.log_identity_ok = false;
        if (mu_sum != (n == 1 ? 1 : 0) && r.mobius_ok) {
            r.mobius_ok = false;
            r.first_mobius_failure = n;
        }
        if (phi_sum != n && r.totient_ok) {
            r.totient_ok = false;
            r.first_totient_failure = n;
        }
    };

    const std::uint64_t nwin = (n_max + kSuiteWindow) / kSuiteWindow;  // windows over [1, n_max]
    auto parts = parallel_map(nwin, [&](std::size_t w) {
        DivisorIdentityReport r;
        const std::uint64_t lo = std::max<std::uint64_t>(1, w * kSuiteWindow);
        const std::uint64_t hi = std::min(n_max + 1, (w + 1) * kSuiteWindow);
        std::uint64_t start = lo;
        if (lo == 1) {
            check_n(1, {}, r);
            start = 2;
        }
        if (start < hi) {
            auto seg = factor_segment(start, hi, base);
            for (std::uint64_t n = start; n < hi; ++n) check_n(n, seg.factor(n), r);
        }
        return r;
    });
    for (const auto& r : parts) {
        if (r.max_log_deviation > rep.max_log_deviation) {
            rep.max_log_deviation = r.max_log_deviation;
            rep.worst_n = r.worst_n;
        }
        rep.log_identity_ok = rep.log_identity_ok && r.log_identity_ok;
        if (!r.mobius_ok && rep.mobius_ok) {
            rep.mobius_ok = false;
            rep.first_mobius_failure = r.first_mobius_failure;
        }
        if (!r.totient_ok && rep.totient_ok) {
            rep.totient_ok = false;
            rep.first_totient_failure = r.first_totient_failure;
        }
    }
    return rep;
}

}  // namespace primepairs
