#pragma once

// Reference analytic quantities and trend analysis of sum traces.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "primepairs/trace.hpp"

namespace primepairs {

class PrimeTable;

/// li(x) = Ei(log x) for x >= 2 via Ramanujan's rapidly convergent series;
/// ~1e-15 relative in practice. Throws UsageError for x < 2.
double log_integral(double x);

struct ZetaValues {
    double zeta = 0;
    double dzeta = 0;
    /// ζ'(s)/ζ(s)^2, the value of Σ μ(n) log n / n^s.
    double mobius_log_target() const { return dzeta / (zeta * zeta); }
    /// -ζ'(s)/ζ(s), the value of Σ Λ(n) / n^s.
    double neg_log_derivative() const { return -dzeta / zeta; }
};

/// ζ(s) and ζ'(s) for real s > 1 by Euler-Maclaurin summation with an
/// analytically differentiated tail. Throws UsageError for s <= 1.
ZetaValues zeta_and_deriv(double s);

struct SingularSeries {
    double value = 0;
    /// The truncated product over-estimates: the full product lies in
    /// [value - tail_bound, value], tail_bound = value / (cutoff - 1).
    double tail_bound = 0;
    std::uint64_t cutoff = 0;
    std::optional<std::string> warning;
};

/// Hardy-Littlewood constant for #{p <= x : m p + k prime} ~ C x / log^2 x:
/// Π_p (1 - ν(p)/p) / (1 - 1/p)^2 over p <= cutoff, ν(p) the number of
/// roots of n (m n + k) mod p. Zero (with warning) when the form is not
/// parity admissible. cutoff >= 1000.
SingularSeries singular_series(const LinearForm& form, std::uint64_t cutoff);

enum class FitModel { LogLog, XOverLogSquared, LogIntegral };

std::string to_string(FitModel m);
/// "loglog", "x/log2x" (also "xlog2"), "li".
FitModel parse_fit_model(const std::string& name);
/// The model's basis function g(x): value ≈ c g(x) + b for loglog,
/// value ≈ c g(x) for the two growth models.
double fit_basis(FitModel m, double x);

struct FitWindow {
    double x_lo = 1000;  // log log x is too flat below this
    double x_hi = 1e300;
};

struct FitResult {
    FitModel model = FitModel::LogLog;
    double c = 0;
    double b = 0;
    double rms_residual = 0;
    double x_lo = 0;  // first and last x actually used
    double x_hi = 0;
    std::size_t points = 0;
};

/// Ordinary least squares over the checkpoints inside the window (centered
/// normal equations for loglog, through the origin otherwise). Needs >= 4
/// points with distinct g; UsageError otherwise.
FitResult fit(const SumTrace& trace, FitModel model, FitWindow window = {});

struct SignBracket {
    double x_lo, x_hi;
    double v_lo, v_hi;
};

/// Consecutive checkpoints whose values have strictly opposite signs (a zero
/// value is not a sign). No refinement between checkpoints.
std::vector<SignBracket> sign_changes(const SumTrace& trace);

enum class ResidueRule { AllReduced, One };

struct NormalizedErrorPoint {
    std::uint64_t x = 0, q = 1, a = 1;
    double psi = 0;
    double main = 0;        // x / φ(q)
    double normalized = 0;  // (psi - main) q^{1/2} / x^{1/2}
};

struct NormalizedErrorTrace {
    std::vector<NormalizedErrorPoint> points;  // grid-major, then q, then a
    struct PerModulus {
        std::uint64_t q;
        double max_abs_normalized;
    };
    std::vector<PerModulus> summary;
};

/// ψ(x, q, a) against x/φ(q) on every grid point for q in [q_lo, q_hi].
/// Moduli are processed in parallel and assembled in q order.
NormalizedErrorTrace montgomery_track(const PrimeTable& table, std::span<const std::uint64_t> grid,
                                      std::uint64_t q_lo, std::uint64_t q_hi, ResidueRule rule);

}  // namespace primepairs
