#include "multiplier.hpp"

#include <algorithm>
#include <json.hpp>
#include <limits>
#include <span>

#include "arith.hpp"
#include "witt.hpp"

namespace nilmult {

using arith::primes_up_to;
using witt::chi;
using witt::chi_iterate;
using witt::chi_with_letter;

namespace {

void require_well_formed(const GroupSpec& spec, const ClassRow& row) {
    if (spec.orders.empty()) throw DomainError("validate: spec has no factors");
    if (spec.classes.size() + 1 != spec.orders.size())
        throw DomainError("validate: class count must be factor count - 1");
    if (row.classes.empty()) throw DomainError("validate: class row is empty");
    for (unsigned c : row.classes)
        if (c == 0) throw DomainError("validate: class row entries must be positive");
}

}  // namespace

HypothesisReport validate(const GroupSpec& spec, const ClassRow& row) {
    require_well_formed(spec, row);
    HypothesisReport rep;
    auto add = [&](ViolationKind kind, std::uint64_t prime = 0) {
        rep.violations.push_back({kind, prime});
    };

    const std::size_t t = spec.infinite_prefix();
    const std::size_t count = spec.orders.size();

    bool factor_bad = false;
    for (const Int& m : spec.orders)
        if (m < 0 || m == 1) factor_bad = true;
    for (std::size_t i = t; i < count; ++i)
        if (spec.orders[i] == 0) factor_bad = true;  // infinite factor after a finite one
    if (factor_bad) add(ViolationKind::FactorOrderInvalid);

    if (!spec.classes.empty() && row.classes[0] < spec.classes[0])
        add(ViolationKind::ClassRowTooSmall);
    for (std::size_t i = 0; i + 1 < spec.classes.size(); ++i)
        if (spec.classes[i] < spec.classes[i + 1]) {
            add(ViolationKind::ClassesNotDescending);
            break;
        }

    for (std::size_t i = t; i + 1 < count; ++i) {
        if (spec.orders[i] == 0 || spec.orders[i + 1] == 0) continue;
        if (spec.orders[i] % spec.orders[i + 1] != 0) {
            add(ViolationKind::DivisibilityChainBroken);
            break;
        }
    }

    if (t < count && !spec.classes.empty() && spec.orders[t] > 0) {
        for (std::uint64_t p : primes_up_to(spec.classes[0]))
            if (spec.orders[t] % p == 0) add(ViolationKind::PrimeConditionViolated, p);
    }

    if (t == 0 && !spec.all_classes_one()) add(ViolationKind::UnsupportedShape);

    if (t == count && count >= 2)
        rep.notes.push_back("all factors infinite: torsion part is empty by specialization");
    if (t == 0 && rep.violations.empty())
        rep.notes.push_back("no infinite factors: computed as a direct sum of cyclic groups");

    rep.ok = rep.violations.empty();
    return rep;
}

Int free_rank_count(const GroupSpec& spec, unsigned c) {
    const std::size_t t = spec.infinite_prefix();
    if (t == 0) throw DomainError("free_rank_count: no infinite factors");
    Int u = 0;
    if (t >= 2) {
        unsigned n_last = spec.classes[t - 2];  // class joining the t-th infinite factor
        for (unsigned j = 1; j <= n_last; ++j) u += chi(c + j, Int(t));
        for (std::size_t i = 1; i + 2 <= t; ++i) {
            unsigned hi = spec.classes[i - 1], lo = spec.classes[i];
            for (unsigned j = lo + 1; j <= hi; ++j) u += chi(c + j, Int(i + 1));
        }
    }
    return u;
}

Int torsion_block_count(const GroupSpec& spec, unsigned c, unsigned i) {
    if (i < 1 || i > spec.classes.size())
        throw DomainError("torsion_block_count: factor index out of range");
    Int f = 0;
    for (unsigned j = 1; j <= spec.classes[i - 1]; ++j)
        f += chi_with_letter(c + j, Int(i + 1));
    return f;
}

Int overflow_count(const GroupSpec& spec, unsigned c, unsigned i) {
    if (i < 2 || i > spec.classes.size())
        throw DomainError("overflow_count: factor index out of range");
    Int e = 0;
    for (unsigned j = spec.classes[i - 1] + 1; j <= spec.classes[0]; ++j)
        e += chi_with_letter(c + j, Int(i + 1));
    return e;
}

AbelianStructure nilpotent_multiplier(const GroupSpec& spec, unsigned c) {
    HypothesisReport rep = validate(spec, ClassRow{{c}});
    if (!rep.ok) throw HypothesisError(std::move(rep));

    const std::size_t t = spec.infinite_prefix();
    const std::size_t k = spec.classes.size();
    // no infinite factors: validate guarantees all classes are 1, so the
    // group is the direct sum of its cyclic factors
    if (t == 0) return abelian_multiplier(Int(0), spec.orders, c);

    AbelianStructure out;
    out.free_rank = free_rank_count(spec, c);
    for (std::size_t i = std::max<std::size_t>(t, 1); i <= k; ++i) {
        Int f = torsion_block_count(spec, c, static_cast<unsigned>(i));
        if (f > 0) out.torsion.push_back({spec.orders[i], f});
    }
    return out;
}

AbelianStructure abelian_multiplier(const Int& free_rank, const std::vector<Int>& moduli,
                                    unsigned c) {
    if (c == 0) throw DomainError("abelian_multiplier: class must be positive");
    if (free_rank < 0) throw DomainError("abelian_multiplier: negative free rank");
    HypothesisReport rep;
    for (const Int& m : moduli)
        if (m < 2) rep.violations.push_back({ViolationKind::FactorOrderInvalid});
    for (std::size_t i = 0; i + 1 < moduli.size(); ++i)
        if (moduli[i + 1] >= 2 && moduli[i] >= 2 && moduli[i] % moduli[i + 1] != 0) {
            rep.violations.push_back({ViolationKind::DivisibilityChainBroken});
            break;
        }
    if (!rep.violations.empty()) {
        rep.ok = false;
        throw HypothesisError(std::move(rep));
    }

    AbelianStructure out;
    Int b_prev = chi(c + 1, free_rank);
    out.free_rank = b_prev;
    Int idx = free_rank;
    for (const Int& m : moduli) {
        idx += 1;
        Int b = chi(c + 1, idx);
        if (b - b_prev > 0) out.torsion.push_back({m, b - b_prev});
        b_prev = b;
    }
    return out;
}

AbelianStructure abelian_multiplier(const AbelianStructure& group, unsigned c) {
    if (c == 0) throw DomainError("abelian_multiplier: class must be positive");
    for (std::size_t i = 0; i + 1 < group.torsion.size(); ++i)
        if (group.torsion[i].modulus % group.torsion[i + 1].modulus != 0) {
            HypothesisReport rep;
            rep.ok = false;
            rep.violations.push_back({ViolationKind::DivisibilityChainBroken});
            throw HypothesisError(std::move(rep));
        }

    AbelianStructure out;
    Int cursor = group.free_rank;
    Int b_prev = chi(c + 1, cursor);
    out.free_rank = b_prev;
    for (const TorsionBlock& blk : group.torsion) {
        cursor += blk.multiplicity;
        Int b = chi(c + 1, cursor);
        if (b - b_prev > 0) out.torsion.push_back({blk.modulus, b - b_prev});
        b_prev = b;
    }
    return out;
}

AbelianStructure polynilpotent_multiplier(const GroupSpec& spec, const ClassRow& row) {
    HypothesisReport rep = validate(spec, row);
    if (!rep.ok) throw HypothesisError(std::move(rep));

    const unsigned c1 = row.classes[0];
    const std::size_t t = spec.infinite_prefix();
    const std::size_t k = spec.classes.size();
    const std::span<const unsigned> tail(row.classes.data() + 1, row.classes.size() - 1);

    if (t == 0) {
        // direct sum of cyclic groups: no closed form needed, iterate
        AbelianStructure a = abelian_multiplier(Int(0), spec.orders, c1);
        for (unsigned c : tail) a = abelian_multiplier(a, c);
        return a;
    }

    AbelianStructure out;
    Int acc = free_rank_count(spec, c1);
    Int d_prev = chi_iterate(acc, tail);
    out.free_rank = d_prev;
    for (std::size_t i = std::max<std::size_t>(t, 1); i <= k; ++i) {
        acc += torsion_block_count(spec, c1, static_cast<unsigned>(i));
        Int d = chi_iterate(acc, tail);
        if (d - d_prev > 0) out.torsion.push_back({spec.orders[i], d - d_prev});
        d_prev = d;
    }
    return out;
}

AbelianStructure iterated_multiplier(const GroupSpec& spec, const ClassRow& row) {
    HypothesisReport rep = validate(spec, row);
    if (!rep.ok) throw HypothesisError(std::move(rep));

    AbelianStructure a = nilpotent_multiplier(spec, row.classes[0]);
    for (std::size_t j = 1; j < row.classes.size(); ++j)
        a = abelian_multiplier(a, row.classes[j]);
    return a;
}

namespace {

nlohmann::json int_to_json(const Int& v) {
    if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max())
        return v.convert_to<std::uint64_t>();
    return v.str();
}

Int int_from_json(const nlohmann::json& j, const char* what) {
    if (j.is_number_unsigned()) return Int(j.get<std::uint64_t>());
    if (j.is_number_integer()) return Int(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::exception&) {
            throw DomainError(std::string("json: malformed integer in ") + what);
        }
    }
    throw DomainError(std::string("json: expected integer for ") + what);
}

}  // namespace

std::string structure_to_json(const AbelianStructure& a) {
    nlohmann::json j;
    j["schema"] = 1;
    j["free_rank"] = int_to_json(a.free_rank);
    j["torsion"] = nlohmann::json::array();
    for (const TorsionBlock& b : a.torsion)
        j["torsion"].push_back(
            {{"modulus", int_to_json(b.modulus)}, {"multiplicity", int_to_json(b.multiplicity)}});
    return j.dump();
}

AbelianStructure structure_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw DomainError("json: malformed document");
    if (j.contains("schema") && j["schema"] != 1) throw DomainError("json: unknown schema");
    AbelianStructure a;
    if (!j.contains("free_rank")) throw DomainError("json: missing free_rank");
    a.free_rank = int_from_json(j["free_rank"], "free_rank");
    if (a.free_rank < 0) throw DomainError("json: negative free_rank");
    if (j.contains("torsion")) {
        if (!j["torsion"].is_array()) throw DomainError("json: torsion must be an array");
        for (const auto& e : j["torsion"]) {
            TorsionBlock b;
            b.modulus = int_from_json(e.at("modulus"), "modulus");
            b.multiplicity = int_from_json(e.at("multiplicity"), "multiplicity");
            if (b.modulus < 2) throw DomainError("json: modulus must be >= 2");
            if (b.multiplicity < 1) throw DomainError("json: multiplicity must be positive");
            a.torsion.push_back(std::move(b));
        }
    }
    return a;
}

}  // namespace nilmult
