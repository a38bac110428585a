#pragma once

#include "groupspec.hpp"
#include "hall.hpp"

namespace nilmult::hall {

// Basis sets entering the multiplier bookkeeping for a product spec with
// factors x_1..x_{k+1}, infinite prefix of length t, joined at classes
// n_1 >= ... >= n_k, evaluated at class c. Factor indices are 1-based to
// match the m_i / n_i numbering of GroupSpec.

// Basis large enough for every set below: k+1 letters, weights up to c + n_1.
HallBasis basis_for(const GroupSpec& spec, unsigned c, std::uint64_t budget = kDefaultBudget);

// Commutators on x_1..x_{i+1} containing x_{i+1} with weight in
// (c + n_i, c + n_1]: the generators factor i+1 contributes beyond its own
// class reach. Empty when n_i = n_1. Requires 2 <= i <= k.
std::vector<std::uint64_t> overflow_commutators(const HallBasis& basis, const GroupSpec& spec,
                                                unsigned c, unsigned i);

// Commutators on x_1..x_{i+1} containing x_{i+1} with weight in
// [c+1, c+n_i], each powered by m_{i+1}: one torsion block of the
// multiplier. Requires t <= i <= k and i >= 1.
PoweredCommutatorSet torsion_block(const HallBasis& basis, const GroupSpec& spec,
                                   unsigned c, unsigned i);

// Same block over the full weight range [c+1, c+n_1]; the unpruned variant
// whose layers torsion_layer slices by weight. Consistency-test use only.
PoweredCommutatorSet torsion_block_full(const HallBasis& basis, const GroupSpec& spec,
                                        unsigned c, unsigned i);

// Commutators of weight exactly c + offset on x_1..x_{t+j} containing
// x_{t+j}, powered by m_{t+j}. Requires 1 <= offset <= n_1 and
// 1 <= j <= k+1-t.
PoweredCommutatorSet torsion_layer(const HallBasis& basis, const GroupSpec& spec,
                                   unsigned c, unsigned offset, unsigned j);

}  // namespace nilmult::hall
