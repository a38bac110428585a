#include <doctest.h>

#include "arith.hpp"
#include "common.hpp"

using nilmult::DomainError;
using nilmult::Int;
using namespace nilmult::arith;

TEST_CASE("mobius distinguishes squarefree factorizations") {
    CHECK(mobius(1) == 1);
    CHECK(mobius(2) == -1);
    CHECK(mobius(4) == 0);
    CHECK(mobius(6) == 1);
    CHECK(mobius(12) == 0);
    CHECK(mobius(30) == -1);
    CHECK(mobius(2310) == -1);  // 2*3*5*7*11
    CHECK(mobius(30030) == 1);  // 2*3*5*7*11*13
    CHECK_THROWS_AS(mobius(0), DomainError);
}

TEST_CASE("binomial: boundaries, Pascal recurrence, large exact value") {
    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(5, 0) == 1);
    CHECK(binomial(5, 5) == 1);
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(3, 7) == 0);  // k > n
    for (int n = 1; n <= 12; ++n)
        for (int k = 1; k <= n; ++k)
            CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
    CHECK(binomial(60, 30) == Int("118264581564861424"));
    CHECK_THROWS_AS(binomial(-1, 0), DomainError);
    CHECK_THROWS_AS(binomial(3, -2), DomainError);
}

TEST_CASE("binomial_integer extends to negative upper arguments") {
    CHECK(binomial_integer(-1, 0) == 1);
    CHECK(binomial_integer(-1, 3) == -1);  // (-1)^k
    CHECK(binomial_integer(-2, 3) == -4);
    CHECK(binomial_integer(7, 2) == binomial(7, 2));
    // product formula a(a-1)...(a-k+1)/k!
    Int a = -5;
    Int num = a * (a - 1) * (a - 2);
    CHECK(binomial_integer(a, 3) == num / 6);
}

TEST_CASE("primes_up_to is the ascending prime list") {
    CHECK(primes_up_to(1).empty());
    CHECK(primes_up_to(2) == std::vector<std::uint64_t>{2});
    CHECK(primes_up_to(20) == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19});
}

TEST_CASE("binomial divisibility certificate") {
    // (p, 5) = 1 for p <= 2, so 5 | C(5, 2) = 10
    auto cert = binomial_divisibility(2, 5);
    CHECK(cert.coprime_hypothesis);
    CHECK(cert.verified);

    // 2 | 6 and 2 <= 4, hypothesis fails; nothing is verified
    auto bad = binomial_divisibility(4, 6);
    CHECK_FALSE(bad.coprime_hypothesis);
    CHECK_FALSE(bad.verified);

    CHECK_THROWS_AS(binomial_divisibility(0, 5), DomainError);
    CHECK_THROWS_AS(binomial_divisibility(5, 5), DomainError);
}
