#include "witt.hpp"

#include "arith.hpp"

namespace nilmult::witt {

namespace {

Int chi_uncached(unsigned n, const Int& d) {
    if (n == 0) throw DomainError("chi: weight must be positive");
    if (d < 0) throw DomainError("chi: letter count must be non-negative");
    if (d == 0) return 0;
    if (n == 1) return d;
    Int sum = 0;
    for (std::uint64_t m = 1; m * m <= n; ++m) {
        if (n % m != 0) continue;
        std::uint64_t m2 = n / m;
        sum += arith::mobius(m) * boost::multiprecision::pow(d, static_cast<unsigned>(m2));
        if (m2 != m)
            sum += arith::mobius(m2) * boost::multiprecision::pow(d, static_cast<unsigned>(m));
    }
    if (sum % n != 0)
        throw InternalError("chi: Moebius divisor sum not divisible by the weight");
    return sum / n;
}

WittTable& global_table() {
    static WittTable table;
    return table;
}

}  // namespace

Int WittTable::entry(unsigned weight, const Int& letters) {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = entries_.find({weight, letters});
        if (it != entries_.end()) return it->second;
    }
    Int value = chi_uncached(weight, letters);
    std::lock_guard<std::mutex> lock(mutex_);
    if (entries_.size() < max_entries_) entries_.emplace(std::make_pair(weight, letters), value);
    return value;
}

Int chi(unsigned weight, const Int& letters) {
    return global_table().entry(weight, letters);
}

Int chi_with_letter(unsigned weight, const Int& letters) {
    if (letters < 1) throw DomainError("chi_with_letter: letter count must be positive");
    return chi(weight, letters) - chi(weight, letters - 1);
}

Int chi_iterate(const Int& seed, std::span<const unsigned> classes) {
    Int value = seed;
    for (unsigned c : classes) {
        if (c == 0) throw DomainError("chi_iterate: classes must be positive");
        value = chi(c + 1, value);
    }
    return value;
}

}  // namespace nilmult::witt
