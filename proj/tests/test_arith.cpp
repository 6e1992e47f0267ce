#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "primepairs/arith.hpp"
#include "primepairs/common.hpp"

using namespace primepairs;

TEST_CASE("evaluate examples") {
    auto v30 = evaluate(30);
    CHECK(v30.mu == -1);
    CHECK(v30.lambda == 0.0);
    CHECK(v30.phi == 8);

    auto v9 = evaluate(9);
    CHECK(v9.mu == 0);
    CHECK(v9.lambda == doctest::Approx(1.098612).epsilon(1e-6));
    CHECK(v9.phi == 6);

    auto v1 = evaluate(1);
    CHECK(v1.mu == 1);
    CHECK(v1.lambda == 0.0);
    CHECK(v1.phi == 1);

    CHECK_THROWS_AS(evaluate(0), UsageError);
}

TEST_CASE("evaluate matches brute-force definitions") {
    for (std::uint64_t n = 1; n <= 3000; ++n) {
        auto v = evaluate(n);
        REQUIRE(v.mu == oracle::mu(n));
        REQUIRE(v.phi == oracle::phi(n));
        REQUIRE(v.lambda == doctest::Approx(oracle::lambda(n)));
    }
    // a 40-bit semiprime and a prime power
    auto big = evaluate(999983ull * 1000003ull);
    CHECK(big.mu == 1);
    CHECK(big.phi == 999982ull * 1000002ull);
    CHECK(evaluate(1ull << 40).lambda == doctest::Approx(std::log(2.0)));
}

TEST_CASE("evaluate_range agrees with pointwise evaluate") {
    auto vs = evaluate_range(1, 20001);
    REQUIRE(vs.size() == 20000);
    for (const auto& v : vs) {
        auto w = evaluate(v.n);
        REQUIRE(v.mu == w.mu);
        REQUIRE(v.phi == w.phi);
        REQUIRE(v.lambda == w.lambda);
    }
    auto hi = evaluate_range(1000000, 1010000);
    for (const auto& v : hi) REQUIRE(v.mu == oracle::mu(v.n));
}

TEST_CASE("vonmangoldt_via_divisors examples") {
    CHECK(vonmangoldt_via_divisors(9) == doctest::Approx(std::log(3.0)));
    CHECK(std::abs(vonmangoldt_via_divisors(12)) < 1e-12);
    CHECK(vonmangoldt_via_divisors(1) == 0.0);
    CHECK_THROWS_AS(vonmangoldt_via_divisors(0), UsageError);
}

TEST_CASE("divisor identity relation holds for n <= 10^5 and Lambda(p^k) = Lambda(p)") {
    for (std::uint64_t n = 1; n <= 100000; ++n) {
        const double direct = evaluate(n).lambda;
        const double via = vonmangoldt_via_divisors(n);
        REQUIRE(std::abs(direct - via) <= 1e-10 * std::max(1.0, direct));
    }
    for (std::uint64_t p = 2; p <= 1000; ++p) {
        if (!oracle::is_prime(p)) continue;
        const double lp = evaluate(p).lambda;
        for (std::uint64_t pk = p * p; pk <= 1000000000ull; pk *= p) REQUIRE(evaluate(pk).lambda == lp);
    }
}

TEST_CASE("divisors come out in lexicographic exponent order") {
    auto ds = divisors(factorize(12));  // 2^2 * 3
    std::vector<std::uint64_t> got;
    for (auto& d : ds) got.push_back(d.d);
    CHECK(got == std::vector<std::uint64_t>{1, 3, 2, 6, 4, 12});
    CHECK(divisors({}).size() == 1);
}

TEST_CASE("divisor_identity_suite") {
    auto r = divisor_identity_suite(100000);
    CHECK(r.ok());
    CHECK(r.max_log_deviation <= 1e-9);
    auto r1 = divisor_identity_suite(1);
    CHECK(r1.ok());
    // n = 6: Σφ(d) = 1+1+2+2
    std::uint64_t s = 0;
    for (auto& d : divisors(factorize(6))) s += evaluate(d.d).phi;
    CHECK(s == 6);
    CHECK_THROWS_AS(divisor_identity_suite(0), UsageError);
}

TEST_CASE("multiplicativity on random coprime pairs") {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<std::uint64_t> dist(1, 1000000);
    int tested = 0;
    while (tested < 2000) {
        const std::uint64_t a = dist(rng), b = dist(rng);
        if (gcd_u64(a, b) != 1) continue;
        ++tested;
        auto va = evaluate(a), vb = evaluate(b), vab = evaluate(a * b);
        REQUIRE(vab.mu == va.mu * vb.mu);
        REQUIRE(vab.phi == va.phi * vb.phi);
    }
}
