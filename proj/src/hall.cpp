#include "hall.hpp"

#include <algorithm>

namespace nilmult::hall {

namespace {
std::uint64_t pair_key(std::uint64_t left, std::uint64_t right) {
    return (left << 32) | right;
}
}  // namespace

HallBasis HallBasis::build(unsigned letters, unsigned max_weight, std::uint64_t budget) {
    if (letters == 0) throw DomainError("hall: letter count must be positive");
    if (letters > 64) throw DomainError("hall: enumeration supports at most 64 letters");
    if (max_weight == 0) throw DomainError("hall: max weight must be positive");

    HallBasis basis;
    basis.letters_ = letters;
    basis.max_weight_ = max_weight;
    basis.weight_begin_.assign(max_weight + 2, 0);

    if (letters > budget)
        throw ResourceError("hall: enumeration budget exceeded at letters=" +
                            std::to_string(letters) + " weight=1");
    for (unsigned l = 1; l <= letters; ++l) {
        BasicCommutator bc;
        bc.letter = l;
        bc.weight = 1;
        bc.letters_mask = 1ull << (l - 1);
        basis.items_.push_back(bc);
    }
    basis.weight_begin_[1] = 0;
    basis.weight_begin_[2] = letters;

    for (unsigned w = 2; w <= max_weight; ++w) {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
        // a > b forces weight(a) >= weight(b); strata of equal weight need the
        // index comparison, heavier-left strata satisfy it automatically.
        for (unsigned wa = (w + 1) / 2; wa <= w - 1; ++wa) {
            unsigned wb = w - wa;
            std::uint64_t a0 = basis.weight_begin_[wa], a1 = basis.weight_begin_[wa + 1];
            std::uint64_t b0 = basis.weight_begin_[wb], b1 = basis.weight_begin_[wb + 1];
            for (std::uint64_t a = a0; a < a1; ++a) {
                const BasicCommutator& ca = basis.items_[a];
                // [s, t] may only be bracketed with b >= t
                std::uint64_t bmin = ca.is_letter() ? b0
                                                    : std::max<std::uint64_t>(b0, ca.right);
                std::uint64_t bmax = (wa == wb) ? std::min(b1, a) : b1;
                for (std::uint64_t b = bmin; b < bmax; ++b) pairs.emplace_back(a, b);
            }
        }
        std::sort(pairs.begin(), pairs.end());
        if (basis.items_.size() + pairs.size() > budget)
            throw ResourceError("hall: enumeration budget exceeded at letters=" +
                                std::to_string(letters) + " weight=" + std::to_string(w));
        for (auto [a, b] : pairs) {
            BasicCommutator bc;
            bc.left = static_cast<std::int64_t>(a);
            bc.right = static_cast<std::int64_t>(b);
            bc.weight = w;
            bc.letters_mask = basis.items_[a].letters_mask | basis.items_[b].letters_mask;
            basis.pair_index_.emplace(pair_key(a, b), basis.items_.size());
            basis.items_.push_back(bc);
        }
        basis.weight_begin_[w + 1] = basis.items_.size();
    }
    return basis;
}

std::vector<std::uint64_t> HallBasis::slice(unsigned min_weight, unsigned max_weight) const {
    if (min_weight == 0 || min_weight > max_weight)
        throw DomainError("hall: slice requires 1 <= min_weight <= max_weight");
    if (max_weight > max_weight_)
        throw DomainError("hall: slice beyond generated weight");
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = weight_begin(min_weight); i < weight_end(max_weight); ++i)
        out.push_back(i);
    return out;
}

std::uint64_t HallBasis::weight_begin(unsigned weight) const {
    if (weight < 1) return 0;
    if (weight > max_weight_) return items_.size();
    return weight_begin_[weight];
}

std::optional<std::uint64_t> HallBasis::find_pair(std::uint64_t left, std::uint64_t right) const {
    auto it = pair_index_.find(pair_key(left, right));
    if (it == pair_index_.end()) return std::nullopt;
    return it->second;
}

std::string HallBasis::to_string(std::uint64_t order_index) const {
    const BasicCommutator& bc = items_[order_index];
    if (bc.is_letter()) return "x" + std::to_string(bc.letter);
    return "[" + to_string(bc.left) + "," + to_string(bc.right) + "]";
}

std::vector<unsigned> HallBasis::letter_counts(std::uint64_t order_index) const {
    std::vector<unsigned> counts(letters_ + 1, 0);
    // iterative walk; entries only reference smaller indices
    std::vector<std::uint64_t> stack{order_index};
    while (!stack.empty()) {
        std::uint64_t i = stack.back();
        stack.pop_back();
        const BasicCommutator& bc = items_[i];
        if (bc.is_letter()) {
            ++counts[bc.letter];
        } else {
            stack.push_back(bc.left);
            stack.push_back(bc.right);
        }
    }
    return counts;
}

std::vector<std::uint64_t> filter_containing(const HallBasis& basis,
                                             std::span<const std::uint64_t> slice,
                                             unsigned letter) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t i : slice)
        if (basis.at(i).contains(letter)) out.push_back(i);
    return out;
}

}  // namespace nilmult::hall
