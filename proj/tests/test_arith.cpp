#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "nilprop/arith.hpp"
#include "nilprop/rational.hpp"

using namespace nilprop;

namespace {

// independent oracles: plain trial division / divisor loops
Factorization naive_factorize(uint64_t n) {
    Factorization out;
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d != 0) continue;
        uint32_t e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        out.push_back({d, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

uint64_t naive_tau(uint64_t n) {
    uint64_t count = 0;
    for (uint64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) count += (d * d == n) ? 1 : 2;
    }
    return count;
}

uint64_t naive_sigma(uint64_t n) {
    uint64_t sum = 0;
    for (uint64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            sum += d;
            if (d * d != n) sum += n / d;
        }
    }
    return sum;
}

uint64_t naive_s2(uint64_t n) {
    uint64_t sum = 0;
    for (uint64_t m = n;; m /= 2) {
        sum += m;
        if (m % 2 != 0) break;
    }
    return sum;
}

uint64_t rng_next(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

TEST_CASE("factorize: pinned examples") {
    CHECK(factorize(1).empty());
    CHECK(factorize(12) == Factorization{{2, 2}, {3, 1}});
    CHECK(factorize(97) == Factorization{{97, 1}});
    CHECK_THROWS_AS(factorize(0), std::invalid_argument);
    CHECK_THROWS_AS(factorize(kFactorizeLimit + 1), std::invalid_argument);
}

TEST_CASE("factorize agrees with trial division on random inputs") {
    uint64_t state = 1;
    for (int i = 0; i < 300; ++i) {
        uint64_t n = rng_next(state) % 1'000'000 + 1;
        auto f = factorize(n);
        CHECK(f == naive_factorize(n));
        uint64_t prev = 0, product = 1;
        for (const auto& [p, e] : f) {
            CHECK(p > prev);
            CHECK(is_prime(p));
            CHECK(e >= 1);
            for (uint32_t k = 0; k < e; ++k) product *= p;
            prev = p;
        }
        CHECK(product == n);
    }
}

TEST_CASE("factorize handles inputs near the 1e14 limit") {
    auto f = factorize(kFactorizeLimit); // 2^14 * 5^14
    CHECK(f == Factorization{{2, 14}, {5, 14}});
    uint64_t product = 1;
    for (const auto& [p, e] : f)
        for (uint32_t k = 0; k < e; ++k) product *= p;
    CHECK(product == kFactorizeLimit);
    CHECK(is_prime(99'999'999'999'973ULL));
}

TEST_CASE("tau / sigma / s2: pinned examples") {
    CHECK(tau(1) == 1);
    CHECK(tau(12) == 6);
    CHECK(tau(21) == 4); // tau(3p) = 4 at p = 7
    CHECK(sigma(1) == 1);
    CHECK(sigma(6) == 12);
    CHECK(sigma(21) == 32); // sigma(3p) = 4(p+1) at p = 7
    CHECK(s2(1) == 1);
    CHECK(s2(8) == 15);
    CHECK(s2(12) == 21);
    CHECK_THROWS_AS(tau(0), std::invalid_argument);
    CHECK_THROWS_AS(sigma(0), std::invalid_argument);
    CHECK_THROWS_AS(s2(0), std::invalid_argument);
}

TEST_CASE("tau and sigma are multiplicative on coprime pairs") {
    uint64_t state = 2;
    int checked = 0;
    while (checked < 200) {
        uint64_t a = rng_next(state) % 10'000 + 1;
        uint64_t b = rng_next(state) % 10'000 + 1;
        if (std::gcd(a, b) != 1) continue;
        CHECK(tau(a * b) == tau(a) * tau(b));
        CHECK(sigma(a * b) == sigma(a) * sigma(b));
        ++checked;
    }
}

TEST_CASE("s2 identities over 1..1e5") {
    for (uint64_t n = 1; n <= 100'000; ++n) {
        uint32_t v = two_valuation(n);
        CHECK(s2(n) == odd_part(n) * sigma(uint64_t(1) << v));
        bool pow2 = odd_part(n) == 1;
        CHECK((s2(n) == sigma(n)) == pow2);
    }
}

TEST_CASE("s2 matches its definition") {
    uint64_t state = 3;
    for (int i = 0; i < 200; ++i) {
        uint64_t n = rng_next(state) % 1'000'000 + 1;
        CHECK(s2(n) == naive_s2(n));
    }
}

TEST_CASE("nth_prime") {
    CHECK(nth_prime(1) == 2);
    CHECK(nth_prime(2) == 3);
    CHECK(nth_prime(25) == 97);
    CHECK_THROWS_AS(nth_prime(0), std::invalid_argument);
}

TEST_CASE("prime stream matches per-value primality up to 1e5") {
    PrimeStream stream;
    uint64_t prev = 1;
    while (true) {
        uint64_t p = stream.next();
        if (p > 100'000) break;
        CHECK(is_prime(p));
        for (uint64_t q = prev + 1; q < p; ++q) CHECK_FALSE(is_prime(q));
        prev = p;
    }
}

TEST_CASE("divisor sieve: pinned examples and cap") {
    DivisorSieve one(1);
    CHECK(one.tau(1) == 1);
    CHECK(one.sigma(1) == 1);

    DivisorSieve sieve(12);
    CHECK(sieve.tau(12) == 6);
    CHECK(sieve.sigma(12) == 28);

    CHECK_THROWS_AS(DivisorSieve(0), std::invalid_argument);
    CHECK_THROWS_WITH_AS(DivisorSieve(DivisorSieve::kDefaultCap + 1),
                         doctest::Contains("10000000"), ResourceLimitError);
}

TEST_CASE("divisor sieve agrees with per-n functions on every n <= 1e5") {
    DivisorSieve sieve(100'000);
    for (uint64_t n = 1; n <= 100'000; ++n) {
        CHECK(sieve.tau(n) == tau(n));
        CHECK(sieve.sigma(n) == sigma(n));
    }
}

TEST_CASE("divisor sieve at 1e6: random spot checks against divisor loops") {
    DivisorSieve sieve(1'000'000);
    uint64_t state = 4;
    for (int i = 0; i < 100; ++i) {
        uint64_t n = rng_next(state) % 1'000'000 + 1;
        CHECK(sieve.tau(n) == naive_tau(n));
        CHECK(sieve.sigma(n) == naive_sigma(n));
    }
}

TEST_CASE("rational: reduction and arithmetic") {
    Rational r(50, 72);
    CHECK(r.num() == 25);
    CHECK(r.den() == 36);
    CHECK(r.str() == "25/36");
    CHECK(Rational(4, 4).is_one());
    CHECK(Rational(0, 7) == Rational(0, 1));
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);

    CHECK(Rational(13, 16) * Rational(2, 13) == Rational(1, 8));
    CHECK(Rational(1, 6) + Rational(1, 3) == Rational(1, 2));
    CHECK(Rational(25, 36).abs_diff(Rational(3, 4)) == Rational(1, 18));
    CHECK(Rational(3, 4).abs_diff(Rational(25, 36)) == Rational(1, 18));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(13, 16).to_double() == doctest::Approx(0.8125).epsilon(1e-15));
}

TEST_CASE("rational: overflow raises instead of wrapping") {
    uint128 big = uint128(1) << 100;
    Rational huge(big, 1);
    CHECK_THROWS_AS(huge * huge, std::overflow_error);
    CHECK_THROWS_AS(checked_add(~uint128(0), 1), std::overflow_error);
}

TEST_CASE("u128 decimal formatting") {
    CHECK(to_string(uint128(0)) == "0");
    CHECK(to_string(uint128(UINT64_MAX)) == "18446744073709551615");
    CHECK(to_string(checked_mul(uint128(UINT64_MAX), 10)) == "184467440737095516150");
}
