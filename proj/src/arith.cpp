#include "arith.hpp"

#include <map>
#include <mutex>
#include <numeric>

namespace nilmult::arith {

namespace {
std::mutex g_mobius_mutex;
std::map<std::uint64_t, int>& mobius_cache() {
    static std::map<std::uint64_t, int> cache;
    return cache;
}

int mobius_uncached(std::uint64_t m) {
    int sign = 1;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            m /= p;
            if (m % p == 0) return 0;  // squared factor
            sign = -sign;
        }
    }
    if (m > 1) sign = -sign;  // remaining prime
    return sign;
}
}  // namespace

int mobius(std::uint64_t m) {
    if (m == 0) throw DomainError("mobius: argument must be positive");
    if (m == 1) return 1;
    std::lock_guard<std::mutex> lock(g_mobius_mutex);
    auto& cache = mobius_cache();
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    int value = mobius_uncached(m);
    cache.emplace(m, value);
    return value;
}

Int binomial(const Int& n, const Int& k) {
    if (n < 0 || k < 0) throw DomainError("binomial: arguments must be non-negative");
    if (k > n) return 0;
    Int kk = (k > n - k) ? n - k : k;
    Int result = 1;
    for (Int i = 1; i <= kk; ++i) {
        result *= n - kk + i;
        result /= i;  // exact: product of i consecutive integers is divisible by i!
    }
    return result;
}

Int binomial_integer(const Int& a, unsigned k) {
    Int num = 1;
    Int den = 1;
    for (unsigned i = 0; i < k; ++i) {
        num *= a - i;
        den *= i + 1;
    }
    Int q = num / den;
    if (q * den != num) throw InternalError("binomial_integer: non-exact division");
    return q;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
    std::vector<std::uint64_t> primes;
    if (n < 2) return primes;
    std::vector<bool> composite(n + 1, false);
    for (std::uint64_t p = 2; p <= n; ++p) {
        if (composite[p]) continue;
        primes.push_back(p);
        for (std::uint64_t q = p * p; q <= n; q += p) composite[q] = true;
    }
    return primes;
}

BinomialDivisibility binomial_divisibility(std::uint64_t w, std::uint64_t r) {
    if (w < 1 || w >= r) throw DomainError("binomial_divisibility: requires 1 <= w < r");
    BinomialDivisibility cert{true, false};
    for (std::uint64_t p : primes_up_to(w)) {
        if (std::gcd(p, r) != 1) {
            cert.coprime_hypothesis = false;
            return cert;
        }
    }
    Int b = binomial(Int(r), Int(w));
    if (b % r != 0)
        throw InternalError("binomial_divisibility: r does not divide C(r, w) despite hypothesis");
    cert.verified = true;
    return cert;
}

}  // namespace nilmult::arith
