#include "groupspec.hpp"

#include <sstream>

namespace nilmult {

std::string format_group(const GroupSpec& spec) {
    std::ostringstream out;
    for (std::size_t i = 0; i < spec.orders.size(); ++i) {
        if (i > 0) {
            unsigned n = i - 1 < spec.classes.size() ? spec.classes[i - 1] : 0;
            out << " *[" << n << "] ";
        }
        if (spec.orders[i] == 0)
            out << "Z";
        else
            out << "Z/" << spec.orders[i];
    }
    return out.str();
}

AbelianStructure AbelianStructure::canonical() const {
    AbelianStructure out;
    out.free_rank = free_rank;
    for (const TorsionBlock& b : torsion) {
        if (b.multiplicity == 0 || b.modulus == 1) continue;
        if (!out.torsion.empty() && out.torsion.back().modulus == b.modulus)
            out.torsion.back().multiplicity += b.multiplicity;
        else
            out.torsion.push_back(b);
    }
    return out;
}

std::string format_structure(const AbelianStructure& a) {
    if (a.is_trivial()) return "0";
    std::ostringstream out;
    bool first = true;
    auto sep = [&] {
        if (!first) out << " + ";
        first = false;
    };
    if (a.free_rank > 0) {
        sep();
        out << "Z";
        if (a.free_rank != 1) out << "^" << a.free_rank;
    }
    for (const TorsionBlock& b : a.torsion) {
        sep();
        if (b.multiplicity == 1)
            out << "Z/" << b.modulus;
        else
            out << "(Z/" << b.modulus << ")^" << b.multiplicity;
    }
    return out.str();
}

std::string Violation::text() const {
    switch (kind) {
        case ViolationKind::ClassRowTooSmall: return "ClassRowTooSmall";
        case ViolationKind::ClassesNotDescending: return "ClassesNotDescending";
        case ViolationKind::DivisibilityChainBroken: return "DivisibilityChainBroken";
        case ViolationKind::PrimeConditionViolated:
            return "PrimeConditionViolated(" + std::to_string(prime) + ")";
        case ViolationKind::FactorOrderInvalid: return "FactorOrderInvalid";
        case ViolationKind::UnsupportedShape: return "UnsupportedShape";
    }
    throw InternalError("unknown violation kind");
}

std::string HypothesisReport::summary() const {
    if (ok) return "ok";
    std::string out;
    for (const Violation& v : violations) {
        if (!out.empty()) out += "; ";
        out += v.text();
    }
    return out;
}

HypothesisError::HypothesisError(HypothesisReport r)
    : DomainError("hypothesis not satisfied: " + r.summary()), report(std::move(r)) {}

}  // namespace nilmult
