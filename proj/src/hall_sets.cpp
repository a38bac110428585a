#include "hall_sets.hpp"

namespace nilmult::hall {

namespace {

unsigned first_class(const GroupSpec& spec) {
    if (spec.classes.empty()) throw DomainError("basis sets: spec has a single factor");
    return spec.classes.front();
}

// weight range [wmin, wmax] on the first `letters` letters, containing the
// top letter
std::vector<std::uint64_t> cross_slice(const HallBasis& basis, unsigned wmin, unsigned wmax,
                                       unsigned letters) {
    if (letters > basis.letters())
        throw DomainError("basis sets: letter index beyond generated basis");
    if (wmax > basis.max_weight())
        throw DomainError("basis sets: weight beyond generated basis");
    std::vector<std::uint64_t> out;
    if (wmin > wmax) return out;
    for (std::uint64_t id = basis.weight_begin(wmin); id < basis.weight_end(wmax); ++id) {
        const BasicCommutator& bc = basis.at(id);
        if (letters < 64 && (bc.letters_mask >> letters) != 0) continue;
        if (bc.contains(letters)) out.push_back(id);
    }
    return out;
}

}  // namespace

HallBasis basis_for(const GroupSpec& spec, unsigned c, std::uint64_t budget) {
    if (c == 0) throw DomainError("basis sets: class must be positive");
    unsigned letters = static_cast<unsigned>(spec.factor_count());
    unsigned n1 = spec.classes.empty() ? 0 : first_class(spec);
    return HallBasis::build(letters, c + n1, budget);
}

std::vector<std::uint64_t> overflow_commutators(const HallBasis& basis, const GroupSpec& spec,
                                                unsigned c, unsigned i) {
    unsigned k = static_cast<unsigned>(spec.classes.size());
    if (i < 2 || i > k) throw DomainError("overflow_commutators: factor index out of range");
    unsigned n1 = spec.classes[0];
    unsigned ni = spec.classes[i - 1];
    return cross_slice(basis, c + ni + 1, c + n1, i + 1);
}

PoweredCommutatorSet torsion_block(const HallBasis& basis, const GroupSpec& spec,
                                   unsigned c, unsigned i) {
    unsigned k = static_cast<unsigned>(spec.classes.size());
    std::size_t t = spec.infinite_prefix();
    if (i < 1 || i < t || i > k) throw DomainError("torsion_block: factor index out of range");
    unsigned ni = spec.classes[i - 1];
    PoweredCommutatorSet set;
    set.base_commutators = cross_slice(basis, c + 1, c + ni, i + 1);
    set.exponent = spec.orders[i];  // m_{i+1}
    return set;
}

PoweredCommutatorSet torsion_block_full(const HallBasis& basis, const GroupSpec& spec,
                                        unsigned c, unsigned i) {
    unsigned k = static_cast<unsigned>(spec.classes.size());
    std::size_t t = spec.infinite_prefix();
    if (i < 1 || i < t || i > k)
        throw DomainError("torsion_block_full: factor index out of range");
    unsigned n1 = spec.classes[0];
    PoweredCommutatorSet set;
    set.base_commutators = cross_slice(basis, c + 1, c + n1, i + 1);
    set.exponent = spec.orders[i];
    return set;
}

PoweredCommutatorSet torsion_layer(const HallBasis& basis, const GroupSpec& spec,
                                   unsigned c, unsigned offset, unsigned j) {
    unsigned k = static_cast<unsigned>(spec.classes.size());
    std::size_t t = spec.infinite_prefix();
    unsigned n1 = spec.classes.empty() ? 0 : spec.classes[0];
    if (offset < 1 || offset > n1) throw DomainError("torsion_layer: weight offset out of range");
    if (j < 1 || t + j > k + 1) throw DomainError("torsion_layer: factor index out of range");
    unsigned letter = static_cast<unsigned>(t) + j;
    PoweredCommutatorSet set;
    set.base_commutators = cross_slice(basis, c + offset, c + offset, letter);
    set.exponent = spec.orders[letter - 1];  // m_{t+j}
    return set;
}

}  // namespace nilmult::hall
