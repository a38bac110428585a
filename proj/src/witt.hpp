#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>

#include "common.hpp"

namespace nilmult::witt {

// Memo table for Witt numbers. Entries are computed once; concurrent fills of
// the same key produce the same value, so a plain lock suffices. Capacity is
// capped so long sweeps cannot grow the table without bound; past the cap,
// values are computed but not stored.
class WittTable {
  public:
    explicit WittTable(std::size_t max_entries = 1u << 20) : max_entries_(max_entries) {}

    Int entry(unsigned weight, const Int& letters);

  private:
    std::size_t max_entries_;
    std::mutex mutex_;
    std::map<std::pair<unsigned, Int>, Int> entries_;
};

// chi(n, d): number of basic commutators of weight n on d letters,
// (1/n) * sum over m | n of mu(m) d^(n/m). Exact; the divisor sum is checked
// to be divisible by n before dividing. chi(n, 0) = 0 and chi(1, d) = d.
Int chi(unsigned weight, const Int& letters);

// chi(n, d) - chi(n, d-1): weight-n basic commutators on x_1..x_d in which
// x_d appears. Requires d >= 1.
Int chi_with_letter(unsigned weight, const Int& letters);

// chi_{c_s+1}( ... chi_{c_2+1}(seed) ... ) for classes = [c_2, ..., c_s];
// the empty composition returns seed unchanged.
Int chi_iterate(const Int& seed, std::span<const unsigned> classes);

}  // namespace nilmult::witt
