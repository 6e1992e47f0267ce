#include "primepairs/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "primepairs/arith.hpp"
#include "primepairs/parallel.hpp"
#include "primepairs/sieve.hpp"
#include "primepairs/sums.hpp"
#include "primepairs/sweep.hpp"

namespace primepairs {

double log_integral(double x) {
    if (!(x >= 2)) throw UsageError("log_integral: x must be >= 2");
    const double L = std::log(x);
    // Ramanujan: li(x) = γ + log L + sqrt(x) Σ (-1)^{n-1} L^n / (n! 2^{n-1}) Σ_{k<=(n-1)/2} 1/(2k+1)
    double a = L;
    double inner = 1.0;
    KahanSum sum;
    sum += a * inner;
    for (int n = 2; n < 4000; ++n) {
        a *= -L / (2.0 * n);
        if (n % 2 == 1) inner += 1.0 / n;
        const double term = a * inner;
        sum += term;
        if (n > L && std::abs(term) < 1e-18 * std::abs(sum.value())) break;
    }
    return std::numbers::egamma + std::log(L) + std::sqrt(x) * sum.value();
}

namespace {

// B_2 .. B_20
constexpr double kBernoulli[] = {1.0 / 6,        -1.0 / 30,       1.0 / 42,         -1.0 / 30,
                                 5.0 / 66,       -691.0 / 2730,   7.0 / 6,          -3617.0 / 510,
                                 43867.0 / 798,  -174611.0 / 330};

}  // namespace

ZetaValues zeta_and_deriv(double s) {
    if (!(s > 1)) throw UsageError("zeta: s must be > 1");
    constexpr int N = 20;
    KahanSum z, dz;
    for (int n = 1; n < N; ++n) {
        const double ln = std::log(static_cast<double>(n));
        const double t = std::exp(-s * ln);
        z += t;
        dz += -ln * t;
    }
    const double lN = std::log(static_cast<double>(N));
    const double N1s = std::exp((1 - s) * lN);
    const double Ns = std::exp(-s * lN);
    z += N1s / (s - 1);
    dz += -lN * N1s / (s - 1) - N1s / ((s - 1) * (s - 1));
    z += Ns / 2;
    dz += -lN * Ns / 2;

    // B_{2j}/(2j)! s(s+1)..(s+2j-2) N^{-s-2j+1}
    double poly = s;          // rising product
    double dlogpoly = 1 / s;  // its log-derivative
    double fact = 2;          // (2j)!
    double Npow = Ns / N;     // N^{-s-1}
    for (int j = 1; j <= 10; ++j) {
        const double t = kBernoulli[j - 1] / fact * poly * Npow;
        z += t;
        dz += t * (dlogpoly - lN);
        poly *= (s + 2 * j - 1) * (s + 2 * j);
        dlogpoly += 1 / (s + 2 * j - 1) + 1 / (s + 2 * j);
        fact *= (2.0 * j + 1) * (2.0 * j + 2);
        Npow /= static_cast<double>(N) * N;
    }
    return ZetaValues{z.value(), dz.value()};
}

SingularSeries singular_series(const LinearForm& form, std::uint64_t cutoff) {
    if (cutoff < 1000) throw UsageError("singular_series: cutoff must be >= 1000");
    SingularSeries out;
    out.cutoff = cutoff;
    if (!form.parity_admissible()) {
        out.warning = form.parity_warning();
        return out;
    }
    const auto m = static_cast<std::uint64_t>(form.m);
    const auto ak = static_cast<std::uint64_t>(form.k < 0 ? -form.k : form.k);
    double v = 1.0;
    for (std::uint64_t p : small_primes(cutoff)) {
        const double pd = static_cast<double>(p);
        if (m % p == 0 || ak % p == 0)
            v *= pd / (pd - 1);
        else
            v *= 1 - 1 / ((pd - 1) * (pd - 1));
    }
    // primes of m k past the cutoff have only one root, so they belong in
    // the product whatever the cutoff
    for (std::uint64_t n : {m, ak}) {
        for (auto [p, e] : factorize(n)) {
            (void)e;
            if (p > cutoff) v *= static_cast<double>(p) / static_cast<double>(p - 1);
        }
    }
    out.value = v;
    out.tail_bound = v / static_cast<double>(cutoff - 1);
    return out;
}

std::string to_string(FitModel m) {
    switch (m) {
        case FitModel::LogLog: return "loglog";
        case FitModel::XOverLogSquared: return "x/log2x";
        case FitModel::LogIntegral: return "li";
    }
    return "loglog";
}

FitModel parse_fit_model(const std::string& name) {
    if (name == "loglog") return FitModel::LogLog;
    if (name == "x/log2x" || name == "xlog2") return FitModel::XOverLogSquared;
    if (name == "li") return FitModel::LogIntegral;
    throw UsageError("unknown fit model '" + name + "' (loglog, x/log2x, li)");
}

double fit_basis(FitModel m, double x) {
    switch (m) {
        case FitModel::LogLog: return std::log(std::log(x));
        case FitModel::XOverLogSquared: {
            const double l = std::log(x);
            return x / (l * l);
        }
        case FitModel::LogIntegral: return log_integral(x);
    }
    return 0;
}

FitResult fit(const SumTrace& trace, FitModel model, FitWindow window) {
    std::vector<double> g, v;
    FitResult r;
    r.model = model;
    for (const auto& pt : trace.points) {
        if (pt.x < window.x_lo || pt.x > window.x_hi || pt.x < 3) continue;
        if (g.empty()) r.x_lo = pt.x;
        r.x_hi = pt.x;
        g.push_back(fit_basis(model, pt.x));
        v.push_back(pt.value);
    }
    if (g.size() < 4) throw UsageError("fit: need at least 4 checkpoints inside the window");
    const double n = static_cast<double>(g.size());
    if (model == FitModel::LogLog) {
        KahanSum sg, sv;
        for (std::size_t i = 0; i < g.size(); ++i) {
            sg += g[i];
            sv += v[i];
        }
        const double gbar = sg.value() / n, vbar = sv.value() / n;
        KahanSum sxx, sxy;
        for (std::size_t i = 0; i < g.size(); ++i) {
            sxx += (g[i] - gbar) * (g[i] - gbar);
            sxy += (g[i] - gbar) * (v[i] - vbar);
        }
        if (!(sxx.value() > 0)) throw UsageError("fit: basis is constant over the window");
        r.c = sxy.value() / sxx.value();
        r.b = vbar - r.c * gbar;
    } else {
        // growth models go through the origin
        KahanSum sgg, sgv;
        for (std::size_t i = 0; i < g.size(); ++i) {
            sgg += g[i] * g[i];
            sgv += g[i] * v[i];
        }
        r.c = sgv.value() / sgg.value();
        r.b = 0;
    }
    KahanSum ss;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double e = v[i] - (r.c * g[i] + r.b);
        ss += e * e;
    }
    r.rms_residual = std::sqrt(ss.value() / n);
    r.points = g.size();
    return r;
}

std::vector<SignBracket> sign_changes(const SumTrace& trace) {
    std::vector<SignBracket> out;
    for (std::size_t i = 1; i < trace.points.size(); ++i) {
        const auto& a = trace.points[i - 1];
        const auto& b = trace.points[i];
        if ((a.value < 0 && b.value > 0) || (a.value > 0 && b.value < 0))
            out.push_back(SignBracket{a.x, b.x, a.value, b.value});
    }
    return out;
}

NormalizedErrorTrace montgomery_track(const PrimeTable& table, std::span<const std::uint64_t> grid,
                                      std::uint64_t q_lo, std::uint64_t q_hi, ResidueRule rule) {
    if (q_lo < 1 || q_hi < q_lo) throw UsageError("montgomery_track: need 1 <= q_lo <= q_hi");
    require_increasing(grid);
    if (!grid.empty() && grid.back() > table.limit()) throw RangeError("montgomery_track: grid exceeds table limit");
    const std::size_t nq = static_cast<std::size_t>(q_hi - q_lo + 1);
    auto per_q = parallel_map(nq, [&](std::size_t i) {
        const std::uint64_t q = q_lo + i;
        std::vector<std::vector<NormalizedErrorPoint>> rows(grid.size());
        const auto res = psi_residues(table, grid, q);
        const double phi = static_cast<double>(evaluate(q).phi);
        const double sq = std::sqrt(static_cast<double>(q));
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const double x = static_cast<double>(grid[g]);
            for (std::uint64_t a = 1; a <= q; ++a) {
                if (gcd_u64(a, q) != 1) continue;
                if (rule == ResidueRule::One && a != 1) break;
                NormalizedErrorPoint pt;
                pt.x = grid[g];
                pt.q = q;
                pt.a = a;
                pt.psi = res[g][a % q];
                pt.main = x / phi;
                pt.normalized = (pt.psi - pt.main) * sq / std::sqrt(x);
                rows[g].push_back(pt);
            }
        }
        return rows;
    });
    NormalizedErrorTrace out;
    for (std::size_t g = 0; g < grid.size(); ++g)
        for (std::size_t i = 0; i < nq; ++i)
            out.points.insert(out.points.end(), per_q[i][g].begin(), per_q[i][g].end());
    for (std::size_t i = 0; i < nq; ++i) {
        double mx = 0;
        for (const auto& row : per_q[i])
            for (const auto& pt : row) mx = std::max(mx, std::abs(pt.normalized));
        out.summary.push_back({q_lo + i, mx});
    }
    return out;
}

}  // namespace primepairs
