#include "primepairs/reference.hpp"

#include <cmath>
#include <vector>

#include "primepairs/common.hpp"

namespace primepairs::reference {

double pair_weighted_sum(const PrimeTable& table, std::uint64_t x, const LinearForm& form) {
    KahanSum s;
    table.for_each_prime(2, x, [&](std::uint64_t p) {
        const auto n = form.image(p);
        if (n >= 2) s += table.von_mangoldt(n) / static_cast<double>(p);
    });
    return s.value();
}

std::uint64_t pair_count(const PrimeTable& table, std::uint64_t x, const LinearForm& form) {
    std::uint64_t c = 0;
    table.for_each_prime(2, x, [&](std::uint64_t p) {
        const auto n = form.image(p);
        c += n >= 2 && n <= x && table.is_prime(n);
    });
    return c;
}

double psi(const PrimeTable& table, std::uint64_t x) {
    KahanSum s;
    for (std::uint64_t n = 2; n <= x; ++n) s += table.von_mangoldt(n);
    return s.value();
}

double mobius_log_sum(std::uint64_t x, double s, int log_power) {
    std::vector<signed char> mu(x + 1, 1);
    std::vector<std::uint32_t> primes;
    std::vector<bool> composite(x + 1, false);
    for (std::uint64_t i = 2; i <= x; ++i) {
        if (!composite[i]) {
            primes.push_back(static_cast<std::uint32_t>(i));
            mu[i] = -1;
        }
        for (auto p : primes) {
            if (i * p > x) break;
            composite[i * p] = true;
            if (i % p == 0) {
                mu[i * p] = 0;
                break;
            }
            mu[i * p] = static_cast<signed char>(-mu[i]);
        }
    }
    KahanSum sum;
    for (std::uint64_t n = 2; n <= x; ++n) {
        if (!mu[n]) continue;
        const double l = std::log(static_cast<double>(n));
        sum += mu[n] * std::pow(l, log_power) * std::exp(-s * l);
    }
    return sum.value();
}

}  // namespace primepairs::reference
