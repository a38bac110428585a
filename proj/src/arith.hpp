#pragma once

#include <cstdint>
#include <vector>

#include "common.hpp"

namespace nilmult::arith {

// Moebius function: 1 for m = 1, 0 if m has a squared prime factor,
// (-1)^s for a product of s distinct primes. Memoized per process.
int mobius(std::uint64_t m);

// Exact C(n, k); zero when k > n.
Int binomial(const Int& n, const Int& k);

// C(a, k) for any integer a (possibly negative): a(a-1)...(a-k+1)/k!.
Int binomial_integer(const Int& a, unsigned k);

// All primes <= n, ascending.
std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

// Certificate for the divisibility consequence of coprimality:
// if (p, r) = 1 for every prime p <= w, then r | C(r, w).
struct BinomialDivisibility {
    bool coprime_hypothesis;  // (p, r) = 1 for all primes p <= w
    bool verified;            // hypothesis held and r | C(r, w) was checked
};

// Requires 1 <= w < r. Checks the hypothesis; when it holds, verifies the
// divisibility exactly (a failure there is an InternalError, it would
// contradict the theorem).
BinomialDivisibility binomial_divisibility(std::uint64_t w, std::uint64_t r);

}  // namespace nilmult::arith
