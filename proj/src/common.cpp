#include "primepairs/common.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

namespace primepairs {

int workers() { return omp_get_max_threads(); }

void set_workers(int n) {
    if (n < 1) throw UsageError("worker count must be >= 1");
    omp_set_num_threads(n);
}

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
    while (b) {
        const std::uint64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
    if (m == 1) return 0;
    __int128 t = 0, new_t = 1;
    __int128 r = m, new_r = a % m;
    while (new_r != 0) {
        const __int128 quot = r / new_r;
        const __int128 tt = t - quot * new_t;
        t = new_t;
        new_t = tt;
        const __int128 rr = r - quot * new_r;
        r = new_r;
        new_r = rr;
    }
    if (r != 1) throw UsageError("inverse_mod: arguments not coprime");
    if (t < 0) t += m;
    return static_cast<std::uint64_t>(t);
}

std::string format_g12(double v) {
    if (v == 0.0) return "0";  // collapse -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double round_g12(double v) {
    if (!std::isfinite(v)) return v;
    return std::strtod(format_g12(v).c_str(), nullptr);
}

}  // namespace primepairs
