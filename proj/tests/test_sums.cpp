#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "primepairs/asymptotic.hpp"
#include "primepairs/common.hpp"
#include "primepairs/reference.hpp"
#include "primepairs/sums.hpp"

using namespace primepairs;

namespace {

const PrimeTable& table() {
    static const PrimeTable t = build_prime_table(2'100'000);
    return t;
}

double oracle_pair_weighted(std::uint64_t x, std::int64_t m, std::int64_t k) {
    return oracle::sum_over_primes(x, [&](std::uint64_t p) {
        const std::int64_t n = m * static_cast<std::int64_t>(p) + k;
        return n < 2 ? 0.0 : oracle::lambda(static_cast<std::uint64_t>(n)) / static_cast<double>(p);
    });
}

bool is_proper_prime_power(std::uint64_t n) {
    auto f = oracle::factorize(n);
    return f.size() == 1 && f[0].second >= 2;
}

}  // namespace

TEST_CASE("pair weighted sum examples") {
    auto r = pair_weighted_sum(table(), 10, LinearForm::make(1, 2));
    CHECK(r.value == doctest::Approx(1.429180).epsilon(1e-6));
    CHECK_FALSE(r.warning);

    auto bad = pair_weighted_sum(table(), 100, LinearForm::make(1, 3));
    CHECK(bad.warning);
}

TEST_CASE("pair weighted sum against direct enumeration") {
    const std::pair<std::int64_t, std::int64_t> forms[] = {{1, 2}, {1, -2}, {1, 4}, {2, 1}, {3, -1}, {1, 3}, {4, 7}};
    for (auto [m, k] : forms) {
        const auto form = LinearForm::make(m, k);
        for (std::uint64_t x : {1ull, 2ull, 3ull, 97ull, 1000ull, 20000ull})
            CHECK(pair_weighted_sum(table(), x, form).value == doctest::Approx(oracle_pair_weighted(x, m, k)));
    }
}

TEST_CASE("pair weighted trace is cumulative and matches pointwise") {
    const auto form = LinearForm::make(1, 6);
    const std::vector<std::uint64_t> grid = {10, 100, 1000, 10000, 100000};
    auto t = pair_weighted_trace(table(), grid, form);
    t.validate();
    REQUIRE(t.points.size() == grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(t.points[i].value == doctest::Approx(pair_weighted_sum(table(), grid[i], form).value).epsilon(1e-13));
}

TEST_CASE("inversion decomposition equals the pair weighted sum") {
    for (auto [m, k] : {std::pair<std::int64_t, std::int64_t>{1, 2}, {1, 8}, {2, 3}, {1, -4}, {5, 2}}) {
        const auto form = LinearForm::make(m, k);
        for (std::uint64_t x : {2ull, 10ull, 333ull, 5000ull}) {
            auto inv = inversion_decomposition(table(), x, form);
            CHECK(inv.value == doctest::Approx(oracle_pair_weighted(x, m, k)).epsilon(1e-10));
            for (std::size_t i = 1; i < inv.ledger.size(); ++i) REQUIRE(inv.ledger[i - 1].d < inv.ledger[i].d);
            for (const auto& term : inv.ledger) {
                REQUIRE(term.mu == oracle::mu(term.d));
                REQUIRE(term.mu != 0);
            }
        }
    }
}

TEST_CASE("inversion trace checks every x in one pass") {
    const auto form = LinearForm::make(1, 4);
    std::vector<std::uint64_t> xs(3000);
    std::iota(xs.begin(), xs.end(), 1);
    auto inv = inversion_decomposition_trace(table(), xs, form);
    double direct = 0;
    for (std::uint64_t x = 1; x <= 3000; ++x) {
        if (oracle::is_prime(x)) direct += oracle::lambda(x + 4) / static_cast<double>(x);
        REQUIRE(inv[x - 1] == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("restricted inversion drops the even divisors for k = 2") {
    const auto form = LinearForm::make(1, 2);
    auto full = inversion_decomposition(table(), 10, form);
    auto restricted = inversion_decomposition(table(), 10, form, {.restricted = true});
    CHECK(restricted.value == doctest::Approx(1.082606).epsilon(1e-6));
    CHECK(full.value - restricted.value == doctest::Approx(std::log(2.0) / 2));
    // with p | k removed from both sides they agree for every x
    for (std::uint64_t x : {10ull, 1000ull, 50000ull}) {
        auto r = inversion_decomposition(table(), x, form, {.restricted = true, .exclude_primes_dividing_k = true});
        CHECK(r.value == doctest::Approx(pair_weighted_sum_excluding_k_divisors(table(), x, form)).epsilon(1e-10));
    }
}

TEST_CASE("prime power pair sums") {
    const auto form = LinearForm::make(1, 2);
    CHECK(prime_power_pair_sum(table(), 100, form, PairWeight::Reciprocal).value ==
          doctest::Approx(0.6288026).epsilon(1e-6));
    CHECK(prime_power_pair_sum(table(), 100, form, PairWeight::Unweighted).value ==
          doctest::Approx(6.4457198).epsilon(1e-6));

    for (auto [m, k] : {std::pair<std::int64_t, std::int64_t>{1, 2}, {1, -2}, {2, -1}, {3, 2}}) {
        const auto f = LinearForm::make(m, k);
        for (std::uint64_t x : {50ull, 30000ull}) {
            double rec = 0, unw = 0, tail = 0;
            for (std::uint64_t p = 2; p <= x; ++p) {
                if (!oracle::is_prime(p)) continue;
                const std::int64_t n = m * static_cast<std::int64_t>(p) + k;
                if (n < 2 || !is_proper_prime_power(static_cast<std::uint64_t>(n))) continue;
                const double l = oracle::lambda(static_cast<std::uint64_t>(n));
                rec += l / static_cast<double>(p);
                unw += l;
                if (p > 20) tail += l / static_cast<double>(p);
            }
            CHECK(prime_power_pair_sum(table(), x, f, PairWeight::Reciprocal).value == doctest::Approx(rec));
            CHECK(prime_power_pair_sum(table(), x, f, PairWeight::Unweighted).value == doctest::Approx(unw));
            CHECK(prime_power_pair_sum(table(), x, f, PairWeight::Reciprocal, 20).value == doctest::Approx(tail));
        }
    }
}

TEST_CASE("lambda pair sum and its li main term") {
    const auto form = LinearForm::make(1, 2);
    CHECK(lambda_pair_sum(table(), 20, form).value == doctest::Approx(10.8564959).epsilon(1e-7));
    const double direct = oracle::sum_over_primes(100000, [](std::uint64_t p) { return oracle::lambda(p + 2); });
    CHECK(lambda_pair_sum(table(), 100000, form).value == doctest::Approx(direct));

    const std::vector<std::uint64_t> grid = {1, 1000, 100000};
    auto t = lambda_pair_trace(table(), grid, form);
    CHECK_FALSE(t.points[0].main);
    REQUIRE(t.points[2].main);
    CHECK(*t.points[2].main == doctest::Approx(log_integral(1e5)));
    CHECK(*t.points[2].residual == doctest::Approx(t.points[2].value - *t.points[2].main));
}

TEST_CASE("pair counts") {
    const auto twin = LinearForm::make(1, 2);
    std::uint64_t direct = 0;
    auto s = oracle::sieve(1'000'002);
    for (std::uint64_t p = 2; p + 2 <= 1'000'000; ++p) direct += s[p] && s[p + 2];
    CHECK(direct == 8169);
    CHECK(pair_count(table(), 1'000'000, twin) == 8169);

    // both members must be <= x, including when k < 0
    for (auto [m, k] : {std::pair<std::int64_t, std::int64_t>{2, 1}, {1, -2}, {1, 6}, {4, -3}}) {
        const auto f = LinearForm::make(m, k);
        const std::vector<std::uint64_t> grid = {5, 100, 7777, 200000};
        auto t = pair_count_trace(table(), grid, f);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            std::uint64_t c = 0;
            for (std::uint64_t p = 2; p <= grid[i]; ++p) {
                const std::int64_t n = m * static_cast<std::int64_t>(p) + k;
                c += s[p] && n >= 2 && static_cast<std::uint64_t>(n) <= grid[i] && s[static_cast<std::uint64_t>(n)];
            }
            CHECK(t.points[i].value == static_cast<double>(c));
        }
    }
}

TEST_CASE("Hardy-Littlewood partial sums") {
    const auto form = LinearForm::make(1, 2);
    CHECK(hl_partial_sum(table(), 10, 2.0, form).value == doctest::Approx(0.5179986).epsilon(1e-7));
    CHECK(hl_partial_sum(table(), 20, 1.0, form).value == doctest::Approx(3.1039336).epsilon(1e-7));
    double direct = 0;
    for (std::uint64_t n = 2; n <= 5000; ++n)
        direct += oracle::lambda(n) * oracle::lambda(3 * n + 4) / std::pow(static_cast<double>(n), 1.5);
    CHECK(hl_partial_sum(table(), 5000, 1.5, LinearForm::make(3, 4)).value == doctest::Approx(direct));
    CHECK_THROWS_AS(hl_partial_sum(table(), 10, 0.5, form), UsageError);
}

TEST_CASE("Chebyshev tail split") {
    const auto form = LinearForm::make(1, 2);
    auto t = chebyshev_tail(table(), 10, 100, form);
    CHECK(t.power_part == doctest::Approx(0.1252844).epsilon(1e-7));
    CHECK(t.total == doctest::Approx(t.pair_part + t.power_part));
    CHECK(t.total == doctest::Approx(pair_weighted_sum(table(), 100, form).value -
                                     pair_weighted_sum(table(), 10, form).value));
    CHECK(chebyshev_tail(table(), 50, 50, form).total == 0.0);
    CHECK_THROWS_AS(chebyshev_tail(table(), 60, 50, form), UsageError);
}

TEST_CASE("Mertens sums in a residue class") {
    auto rec = mertens_ap(table(), 20, APClass::make(1, 4), PrimeWeight::Reciprocal);
    CHECK(rec.value == doctest::Approx(0.3357466).epsilon(1e-7));
    REQUIRE(rec.least_prime);
    CHECK(*rec.least_prime == 5);
    REQUIRE(rec.main);
    CHECK(*rec.main == doctest::Approx(std::log(std::log(20.0)) / 2 + 0.2));
    auto lg = mertens_ap(table(), 20, APClass::make(1, 4), PrimeWeight::LogOverP);
    CHECK(lg.value == doctest::Approx(0.6858510).epsilon(1e-7));
    CHECK_FALSE(lg.main);

    const std::vector<std::uint64_t> grid = {10, 1000, 100000};
    auto cs = class_sums(table(), grid, 7, PrimeWeight::Reciprocal);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double total = 0;
        for (double v : cs[i]) total += v;
        CHECK(total == doctest::Approx(oracle::sum_over_primes(grid[i], [](std::uint64_t p) { return 1.0 / p; })));
        const double r3 = oracle::sum_over_primes(grid[i], [](std::uint64_t p) { return p % 7 == 3 ? 1.0 / p : 0.0; });
        CHECK(cs[i][3] == doctest::Approx(r3));
    }
    CHECK_THROWS_AS(mertens_ap(table(), 20, APClass{2, 4}, PrimeWeight::Reciprocal), UsageError);
}

TEST_CASE("psi and pi in progressions") {
    auto s = oracle::sieve(200000);
    for (std::uint64_t q : {1ull, 3ull, 10ull, 97ull}) {
        for (std::uint64_t a = 1; a <= q; ++a) {
            if (std::gcd(a, q) != 1) continue;
            double ps = 0;
            std::uint64_t pc = 0;
            for (std::uint64_t n = 2; n <= 200000; ++n)
                if (n % q == a % q) {
                    ps += oracle::lambda(n);
                    pc += s[n];
                }
            CHECK(psi_ap(table(), 200000, q, a) == doctest::Approx(ps));
            CHECK(pi_ap(table(), 200000, q, a) == pc);
        }
    }
    CHECK(psi_ap(table(), 10, 3, 1) == doctest::Approx(2.639057).epsilon(1e-6));
    CHECK(psi(table(), 100) == doctest::Approx(94.0453112).epsilon(1e-8));

    const std::vector<std::uint64_t> grid = {50, 5000};
    auto rs = psi_residues(table(), grid, 6);
    CHECK(rs[1][0] == 0.0);
    CHECK(rs[1][2] == doctest::Approx(6 * std::log(2.0)));  // 2, 8, ..., 2048
    CHECK(rs[1][3] == doctest::Approx(7 * std::log(3.0)));  // 3, 9, ..., 2187
    CHECK(rs[1][1] + rs[1][5] + rs[1][2] + rs[1][3] + rs[1][4] == doctest::Approx(psi(table(), 5000)));
}

TEST_CASE("Lambda Dirichlet partial sums approach -zeta'/zeta") {
    const std::vector<std::uint64_t> grid = {100, 2'000'000};
    auto v = lambda_dirichlet_partial(table(), grid, 3.0);
    double direct = 0;
    for (std::uint64_t n = 2; n <= 100; ++n) direct += oracle::lambda(n) / std::pow(n, 3.0);
    CHECK(v[0] == doctest::Approx(direct));
    CHECK(v[1] == doctest::Approx(zeta_and_deriv(3.0).neg_log_derivative()).epsilon(1e-10));
}

TEST_CASE("twisted Mobius sums") {
    auto r = twisted_mobius_sum(10, 1.0, 1);
    CHECK(r.value == doctest::Approx(-0.7837673).epsilon(1e-7));
    REQUIRE(r.target);
    CHECK(*r.target == -1.0);

    const std::uint64_t x = 300000;  // crosses a window boundary
    std::vector<int> mu(x + 1);
    for (std::uint64_t n = 1; n <= x; ++n) mu[n] = oracle::mu(n);
    struct Case {
        double s;
        int lp;
        MobiusFilter f;
    };
    const Case cases[] = {{1.0, 1, MobiusFilter::none()},
                          {2.0, 1, MobiusFilter::none()},
                          {0.5, 2, MobiusFilter::none()},
                          {1.3, 1, MobiusFilter::coprime_to(6)},
                          {1.0, 2, MobiusFilter::residue(2, 5)}};
    for (const auto& c : cases) {
        long double direct = 0;
        for (std::uint64_t n = 2; n <= x; ++n) {
            if (!mu[n] || !c.f.accepts(n)) continue;
            const double l = std::log(static_cast<double>(n));
            direct += mu[n] * std::pow(l, c.lp) / std::pow(static_cast<double>(n), c.s);
        }
        CHECK(twisted_mobius_sum(x, c.s, c.lp, c.f).value == doctest::Approx(static_cast<double>(direct)));
    }
    CHECK(MobiusFilter::residue(2, 5).accepts(7));
    CHECK_FALSE(MobiusFilter::residue(2, 5).accepts(8));
    CHECK(MobiusFilter::coprime_to(6).label() == "coprime:6");
    CHECK(*twisted_mobius_sum(100, 2.0, 1).target == doctest::Approx(-0.3464947).epsilon(1e-6));
    CHECK_FALSE(twisted_mobius_sum(100, 2.0, 2).target);
    CHECK_THROWS_AS(twisted_mobius_sum(100, 5.0, 1), UsageError);
    CHECK_THROWS_AS(twisted_mobius_sum(100, 1.0, 3), UsageError);
}

TEST_CASE("form sums refuse to run past the table") {
    CHECK(required_limit(100, LinearForm::make(3, 5)) == 305);
    CHECK(required_limit(100, LinearForm::make(1, -5)) == 100);
    CHECK_THROWS_AS(pair_weighted_sum(table(), 2'100'000, LinearForm::make(1, 2)), RangeError);
    CHECK_THROWS_AS(lambda_pair_sum(table(), 1'000'000, LinearForm::make(3, 2)), RangeError);
    CHECK_THROWS_AS(psi(table(), 3'000'000), RangeError);
}

TEST_CASE("results do not depend on the worker count") {
    const auto form = LinearForm::make(1, 2);
    const auto big = build_prime_table(20'000'002);
    const std::vector<std::uint64_t> grid = {1000, 3'000'000, 20'000'000};
    std::vector<std::vector<double>> runs;
    const int before = workers();
    for (int w : {1, 3, 8}) {
        set_workers(w);
        std::vector<double> v;
        for (const auto& pt : pair_weighted_trace(big, grid, form).points) v.push_back(pt.value);
        for (const auto& pt : twisted_mobius_trace(std::span(grid).first(2), 1.0, 1).points) v.push_back(pt.value);
        v.push_back(inversion_decomposition(big, 300000, form).value);
        runs.push_back(v);
    }
    set_workers(before);
    CHECK(runs[0] == runs[1]);
    CHECK(runs[0] == runs[2]);
}

TEST_CASE("parallel kernels agree with the serial references") {
    for (auto [m, k] : {std::pair<std::int64_t, std::int64_t>{1, 2}, {1, -2}, {2, 1}, {3, 10}}) {
        const auto f = LinearForm::make(m, k);
        const std::uint64_t x = 600'000;
        CHECK(pair_weighted_sum(table(), x, f).value ==
              doctest::Approx(reference::pair_weighted_sum(table(), x, f)).epsilon(1e-13));
        CHECK(pair_count(table(), x, f) == reference::pair_count(table(), x, f));
    }
    CHECK(psi(table(), 2'000'000) == doctest::Approx(reference::psi(table(), 2'000'000)).epsilon(1e-13));
    for (double s : {1.0, 2.0, 0.5})
        for (int j : {1, 2})
            CHECK(twisted_mobius_sum(1'000'000, s, j).value ==
                  doctest::Approx(reference::mobius_log_sum(1'000'000, s, j)).epsilon(1e-11));
}
