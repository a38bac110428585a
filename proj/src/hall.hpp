#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "common.hpp"

namespace nilmult::hall {

constexpr std::uint64_t kDefaultBudget = 10'000'000;

// One basic commutator. Letters are leaves (index >= 1); pairs refer to other
// entries of the owning basis by order index. The order index doubles as the
// position in the global Hall order: ascending weight, and within a weight,
// pairs sorted lexicographically by (left index, right index).
struct BasicCommutator {
    std::int64_t left = -1;   // -1 for letters
    std::int64_t right = -1;  // -1 for letters
    unsigned letter = 0;      // 1-based, 0 for pairs
    unsigned weight = 1;
    std::uint64_t letters_mask = 0;  // bit i-1 set iff x_i appears

    bool is_letter() const { return letter != 0; }
    bool contains(unsigned l) const { return l >= 1 && l <= 64 && (letters_mask >> (l - 1)) & 1; }
};

// All basic commutators on x_1..x_d of weight <= max_weight, in Hall order.
class HallBasis {
  public:
    // Enumerates by the defining rules: [a, b] is kept iff
    //   weight(a) + weight(b) = w,  a > b,  and  a = [s, t]  implies  b >= t.
    // Throws ResourceError naming (letters, weight) once the item count passes
    // the budget.
    static HallBasis build(unsigned letters, unsigned max_weight,
                           std::uint64_t budget = kDefaultBudget);

    unsigned letters() const { return letters_; }
    unsigned max_weight() const { return max_weight_; }
    std::size_t size() const { return items_.size(); }
    const BasicCommutator& at(std::size_t order_index) const { return items_[order_index]; }
    const std::vector<BasicCommutator>& items() const { return items_; }

    // Order indices of all items with weight in [min_weight, max_weight].
    std::vector<std::uint64_t> slice(unsigned min_weight, unsigned max_weight) const;

    // First order index of the given weight stratum (== size() past the end).
    std::uint64_t weight_begin(unsigned weight) const;
    std::uint64_t weight_end(unsigned weight) const { return weight_begin(weight + 1); }

    // Order index of the pair [left, right] if it is a basic commutator of
    // weight <= max_weight in this basis.
    std::optional<std::uint64_t> find_pair(std::uint64_t left, std::uint64_t right) const;

    // Nested bracket form, e.g. "[[x2,x1],x1]".
    std::string to_string(std::uint64_t order_index) const;

    // Occurrences of each letter in the commutator (by multiplicity).
    std::vector<unsigned> letter_counts(std::uint64_t order_index) const;

  private:
    unsigned letters_ = 0;
    unsigned max_weight_ = 0;
    std::vector<BasicCommutator> items_;
    std::vector<std::uint64_t> weight_begin_;  // size max_weight_ + 2
    std::unordered_map<std::uint64_t, std::uint64_t> pair_index_;  // (left<<32|right) -> id
};

// Members of the slice whose letters include `letter`, order preserved.
std::vector<std::uint64_t> filter_containing(const HallBasis& basis,
                                             std::span<const std::uint64_t> slice,
                                             unsigned letter);

// A block of basic commutators sharing one exponent (the b^m generators of a
// torsion layer). Indices refer to the basis the block was built from.
struct PoweredCommutatorSet {
    std::vector<std::uint64_t> base_commutators;
    Int exponent;
};

}  // namespace nilmult::hall
