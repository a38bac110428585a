#pragma once

#include <vector>

#include "groupspec.hpp"

namespace nilmult {

// Checks a (spec, class row) pair against the preconditions of the closed
// forms, reporting every violation: (a) c_1 >= n_1 >= ... >= n_k,
// (b) the finite orders form a divisor chain m_{k+1} | ... | m_{t+1},
// (c) every prime p <= n_1 is coprime to m_{t+1}, (d) an infinite factor
// exists or all joining classes are 1. Structurally malformed input (empty
// spec, class count mismatch, zero class entries) throws DomainError
// instead of being reported.
HypothesisReport validate(const GroupSpec& spec, const ClassRow& row);

// Free rank u of the class-c multiplier of spec (infinite prefix t >= 1).
Int free_rank_count(const GroupSpec& spec, unsigned c);

// Torsion multiplicity f_i contributed by factor i+1 (1-based i in [t, k]):
// commutators of weight c+1..c+n_i on x_1..x_{i+1} containing x_{i+1}.
Int torsion_block_count(const GroupSpec& spec, unsigned c, unsigned i);

// Count of the weight-overflow commutators of factor i+1 (1-based i in
// [2, k]): weights c+n_i+1..c+n_1 on x_1..x_{i+1} containing x_{i+1}.
Int overflow_count(const GroupSpec& spec, unsigned c, unsigned i);

// Class-c multiplier of the product spec: Z^u plus one torsion block per
// finite factor. Throws HypothesisError when validate(spec, [c]) fails.
AbelianStructure nilpotent_multiplier(const GroupSpec& spec, unsigned c);

// Class-c multiplier of Z^free_rank + Z/moduli[0] + Z/moduli[1] + ...
// (moduli in divisor-chain order). One output block per modulus, keyed by
// b_i = chi(c+1, i): rank b_m, block i multiplicity b_{m+i} - b_{m+i-1}.
AbelianStructure abelian_multiplier(const Int& free_rank, const std::vector<Int>& moduli,
                                    unsigned c);

// Same computation on a group already in block form; each input block
// yields at most one output block.
AbelianStructure abelian_multiplier(const AbelianStructure& group, unsigned c);

// Multiplier for the class row (c_1, ..., c_s) in closed form:
// d = chi composed along c_2..c_s applied to the partial sums u + f_t +
// ... + f_i. A row of length 1 coincides exactly with nilpotent_multiplier.
AbelianStructure polynilpotent_multiplier(const GroupSpec& spec, const ClassRow& row);

// Same result computed the long way: the class-c_1 multiplier, then the
// abelian multiplier for c_2, ..., c_s in turn. Independent of
// polynilpotent_multiplier above; their agreement is a tested theorem.
AbelianStructure iterated_multiplier(const GroupSpec& spec, const ClassRow& row);

// {"schema":1,"free_rank":u,"torsion":[{"modulus":m,"multiplicity":f},...]}
// Values that fit in an unsigned 64-bit integer are emitted as JSON
// numbers, larger ones as decimal strings; the parser accepts both.
std::string structure_to_json(const AbelianStructure& a);
AbelianStructure structure_from_json(const std::string& text);

}  // namespace nilmult
