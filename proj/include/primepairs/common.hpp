#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace primepairs {

/// Invalid argument combination or out-of-domain input (CLI exit code 2).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Query beyond the range covered by a table or window.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Compensated (Neumaier) accumulator. Addition order matters for the last
/// bits, so callers that need reproducibility must add in a fixed order.
class KahanSum {
public:
    KahanSum() = default;
    explicit KahanSum(double v) : sum_(v) {}

    KahanSum& operator+=(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
        return *this;
    }
    KahanSum& operator+=(const KahanSum& o) {
        *this += o.sum_;
        *this += o.comp_;
        return *this;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Number of OpenMP workers used by the parallel kernels. Results never
/// depend on this value: work is split into fixed-size chunks and partials
/// are reduced in chunk order.
int workers();
void set_workers(int n);

/// Default granularity for prime sweeps, in integers per chunk.
inline constexpr std::uint64_t kSweepChunk = std::uint64_t{1} << 21;

std::uint64_t isqrt(std::uint64_t n);
std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

/// Modular inverse of a modulo m (gcd(a,m) must be 1, m >= 1).
std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m);

/// Format with 12 significant digits; the serialization precision used for
/// every float written by this project.
std::string format_g12(double v);

/// Round a double to 12 significant digits (what format_g12 would print).
double round_g12(double v);

}  // namespace primepairs
