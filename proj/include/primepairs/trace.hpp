#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace primepairs {

/// The map p -> m p + k with m >= 1, k != 0, gcd(m, k) = 1.
/// m <= 2^20 and |k| <= 2^40 keep every image inside 64 bits for tables up
/// to kMaxTableLimit.
struct LinearForm {
    std::int64_t m = 1;
    std::int64_t k = 2;

    static LinearForm make(std::int64_t m, std::int64_t k);

    /// m + k odd. Otherwise m p + k is even for every odd p.
    bool parity_admissible() const { return ((m + k) & 1) != 0; }

    /// m n + k, or 0 when that is <= 0.
    std::uint64_t image(std::uint64_t n) const {
        const __int128 v = static_cast<__int128>(m) * static_cast<__int128>(n) + k;
        return v > 0 ? static_cast<std::uint64_t>(v) : 0;
    }

    std::string label() const;
    std::optional<std::string> parity_warning() const;
};

struct TracePoint {
    double x = 0;
    double value = 0;
    std::optional<double> main;
    std::optional<double> residual;
};

/// Checkpointed series produced by the sum operations.
struct SumTrace {
    std::string operation;
    std::vector<std::pair<std::string, std::string>> params;  // insertion ordered
    std::vector<std::string> warnings;
    std::vector<TracePoint> points;

    /// Throws UsageError unless x is strictly increasing and values finite.
    void validate() const;
    std::vector<double> xs() const;
    std::vector<double> values() const;
};

/// Integer checkpoints round(lo * ratio^i) <= hi, deduplicated, ascending.
/// Requires 1 <= lo <= hi and ratio > 1.
std::vector<std::uint64_t> geometric_grid(double lo, double hi, double ratio);

/// Parses "lo:hi:ratio"; each field accepts scientific notation.
std::vector<std::uint64_t> parse_grid(const std::string& spec);

/// Non-negative integer that may be written as 1e8, 1.5e6 or 100000.
std::uint64_t parse_count(const std::string& text);

/// CSV with header `x,value,main,residual`; absent fields are empty, floats
/// have 12 significant digits.
void write_trace_csv(std::ostream& out, const SumTrace& trace);
SumTrace read_trace_csv(std::istream& in);

}  // namespace primepairs
