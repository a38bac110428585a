#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "common.hpp"

namespace nilmult {

// A product of cyclic groups Z or Z/m_i joined left-associatively, factor
// i joined to the running product at nilpotency class classes[i-1].
// orders[i] == 0 means an infinite cyclic factor.
struct GroupSpec {
    std::vector<Int> orders;
    std::vector<unsigned> classes;  // size == orders.size() - 1 for well-formed specs

    std::size_t factor_count() const { return orders.size(); }

    // t: number of leading infinite factors.
    std::size_t infinite_prefix() const {
        std::size_t t = 0;
        while (t < orders.size() && orders[t] == 0) ++t;
        return t;
    }

    bool all_classes_one() const {
        for (unsigned n : classes)
            if (n != 1) return false;
        return true;
    }

    bool operator==(const GroupSpec&) const = default;
};

// Render in the input grammar, e.g. "Z *[2] Z/5".
std::string format_group(const GroupSpec& spec);

// The nilpotency classes (c_1, ..., c_s) of an iterated multiplier request.
struct ClassRow {
    std::vector<unsigned> classes;

    bool operator==(const ClassRow&) const = default;
};

struct TorsionBlock {
    Int modulus;       // >= 2
    Int multiplicity;  // >= 1

    bool operator==(const TorsionBlock&) const = default;
};

// Finitely generated abelian group: Z^free_rank plus torsion blocks in
// divisor-chain order (each modulus divides its predecessor). Blocks with
// multiplicity 0 or modulus 1 are never stored; adjacent blocks MAY share a
// modulus (they are kept apart when they arise from distinct factors).
struct AbelianStructure {
    Int free_rank = 0;
    std::vector<TorsionBlock> torsion;

    bool is_trivial() const { return free_rank == 0 && torsion.empty(); }

    // Same group with adjacent equal-modulus blocks merged; the representative
    // used for isomorphism comparison.
    AbelianStructure canonical() const;

    bool isomorphic_to(const AbelianStructure& other) const {
        return canonical() == other.canonical();
    }

    bool operator==(const AbelianStructure&) const = default;
};

// "Z^5 + (Z/5)^21 + (Z/5)^12"; "Z" and "Z/7" for rank/multiplicity one;
// "0" for the trivial group.
std::string format_structure(const AbelianStructure& a);

enum class ViolationKind {
    ClassRowTooSmall,
    ClassesNotDescending,
    DivisibilityChainBroken,
    PrimeConditionViolated,
    FactorOrderInvalid,
    UnsupportedShape,
};

struct Violation {
    ViolationKind kind;
    std::uint64_t prime = 0;  // set for PrimeConditionViolated only

    std::string text() const;

    bool operator==(const Violation&) const = default;
};

// Outcome of checking a (spec, class row) pair against the closed-form
// preconditions. ok iff violations is empty; notes flag admissible edge
// shapes handled by specialization rather than the generic formula.
struct HypothesisReport {
    bool ok = true;
    std::vector<Violation> violations;
    std::vector<std::string> notes;

    std::string summary() const;  // "ok" or semicolon-joined violation texts
};

struct HypothesisError : DomainError {
    HypothesisReport report;
    explicit HypothesisError(HypothesisReport r);
};

}  // namespace nilmult
