#include <doctest.h>

#include <string>
#include <vector>

#include "common.hpp"
#include "groupexpr.hpp"
#include "groupspec.hpp"
#include "multiplier.hpp"

using namespace nilmult;

TEST_CASE("hypothesis validation: ok rows, violations, malformed input") {
    auto spec = parse_group_expr("Z *[2] Z/5");
    auto ok = validate(spec, ClassRow{{2}});
    CHECK(ok.ok);
    CHECK(ok.summary() == "ok");

    auto bad = validate(parse_group_expr("Z *[2] Z/4"), ClassRow{{2}});
    CHECK_FALSE(bad.ok);
    REQUIRE(bad.violations.size() == 1);
    CHECK(bad.violations[0] == Violation{ViolationKind::PrimeConditionViolated, 2});
    CHECK(bad.summary() == "PrimeConditionViolated(2)");

    auto desc = validate(parse_group_expr("Z *[1] Z *[2] Z/5"), ClassRow{{2}});
    CHECK(desc.violations == std::vector<Violation>{{ViolationKind::ClassesNotDescending, 0}});

    auto small = validate(parse_group_expr("Z *[2] Z"), ClassRow{{1}});
    CHECK(small.violations == std::vector<Violation>{{ViolationKind::ClassRowTooSmall, 0}});

    CHECK_THROWS_AS(validate(GroupSpec{}, ClassRow{{2}}), DomainError);
    CHECK_THROWS_AS(validate(spec, ClassRow{}), DomainError);
    CHECK_THROWS_AS(validate(spec, ClassRow{{0}}), DomainError);
}

TEST_CASE("multiplier closed forms on frozen examples") {
    CHECK(format_structure(nilpotent_multiplier(parse_group_expr("Z *[2] Z"), 2)) == "Z^5");
    CHECK(format_structure(nilpotent_multiplier(parse_group_expr("Z *[2] Z/5"), 2)) == "(Z/5)^5");
    CHECK(format_structure(nilpotent_multiplier(parse_group_expr("Z *[3] Z"), 3)) == "Z^18");
    CHECK(format_structure(nilpotent_multiplier(
              parse_group_expr("Z *[2] Z *[2] Z/5 *[1] Z/5"), 2)) ==
          "Z^5 + (Z/5)^21 + (Z/5)^12");

    CHECK_THROWS_AS(nilpotent_multiplier(parse_group_expr("Z *[2] Z/4"), 2), HypothesisError);
    try {
        nilpotent_multiplier(parse_group_expr("Z *[2] Z/4"), 2);
        CHECK(false);
    } catch (const HypothesisError& e) {
        REQUIRE(e.report.violations.size() == 1);
        CHECK(e.report.violations[0].kind == ViolationKind::PrimeConditionViolated);
    }
}

TEST_CASE("abelian multipliers: classical class-1 values") {
    CHECK(format_structure(abelian_multiplier(0, {12, 6, 3}, 1)) == "Z/6 + (Z/3)^2");
    CHECK(format_structure(abelian_multiplier(2, {4, 2}, 1)) == "Z + (Z/4)^2 + (Z/2)^3");
    CHECK(abelian_multiplier(3, {}, 1).free_rank == 3);   // chi(2, 3)
    CHECK(abelian_multiplier(3, {}, 2).free_rank == 8);   // chi(3, 3)

    // block form agrees with the flat moduli list
    AbelianStructure grouped{2, {{6, 2}}};
    CHECK(abelian_multiplier(grouped, 2).isomorphic_to(abelian_multiplier(2, {6, 6}, 2)));

    CHECK_THROWS_AS(abelian_multiplier(0, {4, 3}, 1), HypothesisError);  // 3 does not divide 4
    CHECK_THROWS_AS(abelian_multiplier(0, {1}, 1), HypothesisError);     // modulus below 2
    CHECK_THROWS_AS(abelian_multiplier(-1, {}, 1), DomainError);
    CHECK_THROWS_AS(abelian_multiplier(2, {}, 0), DomainError);
}

TEST_CASE("row computation agrees with the stepwise route") {
    auto spec = parse_group_expr("Z *[2] Z");
    ClassRow row{{2, 1}};
    auto direct = polynilpotent_multiplier(spec, row);
    CHECK(format_structure(direct) == "Z^10");  // Z^5, then rank chi(2,5)
    CHECK(direct == iterated_multiplier(spec, row));

    auto spec2 = parse_group_expr("Z *[2] Z/5");
    ClassRow row2{{2, 1, 1}};
    CHECK(polynilpotent_multiplier(spec2, row2).isomorphic_to(iterated_multiplier(spec2, row2)));
    CHECK(polynilpotent_multiplier(spec2, ClassRow{{2}}) == nilpotent_multiplier(spec2, 2));
}

TEST_CASE("no infinite factor: the abelian specialization") {
    auto spec = parse_group_expr("Z/5 *[1] Z/5");
    auto rep = validate(spec, ClassRow{{2}});
    CHECK(rep.ok);
    REQUIRE(rep.notes.size() == 1);
    auto st = nilpotent_multiplier(spec, 2);
    CHECK(st == abelian_multiplier(0, {5, 5}, 2));
    CHECK(format_structure(st) == "(Z/5)^2");

    // joining class above 1 has no closed form without an infinite factor
    auto bad = validate(parse_group_expr("Z/5 *[2] Z/5"), ClassRow{{2}});
    CHECK(bad.violations == std::vector<Violation>{{ViolationKind::UnsupportedShape, 0}});
}

TEST_CASE("json round trip and rejection of malformed documents") {
    auto st = nilpotent_multiplier(parse_group_expr("Z *[2] Z *[2] Z/5 *[1] Z/5"), 2);
    std::string text = structure_to_json(st);
    CHECK(text ==
          "{\"free_rank\":5,\"schema\":1,\"torsion\":[{\"modulus\":5,\"multiplicity\":21},"
          "{\"modulus\":5,\"multiplicity\":12}]}");
    CHECK(structure_from_json(text) == st);

    AbelianStructure big{Int("123456789012345678901234567890"),
                         {{Int(2), Int("99999999999999999999")}}};
    CHECK(structure_from_json(structure_to_json(big)) == big);
    CHECK(structure_from_json("{\"free_rank\":\"7\"}").free_rank == 7);
    CHECK(structure_from_json("{\"schema\":1,\"free_rank\":0}").is_trivial());

    CHECK_THROWS_AS(structure_from_json("not json"), DomainError);
    CHECK_THROWS_AS(structure_from_json("{\"schema\":2,\"free_rank\":1}"), DomainError);
    CHECK_THROWS_AS(structure_from_json("{}"), DomainError);
    CHECK_THROWS_AS(structure_from_json("{\"free_rank\":-1}"), DomainError);
    CHECK_THROWS_AS(structure_from_json("{\"free_rank\":1,\"torsion\":3}"), DomainError);
    CHECK_THROWS_AS(
        structure_from_json("{\"free_rank\":1,\"torsion\":[{\"modulus\":1,\"multiplicity\":1}]}"),
        DomainError);
}

TEST_CASE("canonical form merges adjacent equal moduli") {
    AbelianStructure split{5, {{5, 21}, {5, 12}}};
    AbelianStructure merged{5, {{5, 33}}};
    CHECK(split != merged);
    CHECK(split.canonical() == merged);
    CHECK(split.isomorphic_to(merged));
    CHECK_FALSE(split.isomorphic_to(AbelianStructure{5, {{5, 32}}}));

    CHECK(format_structure(AbelianStructure{}) == "0");
    CHECK(format_structure(AbelianStructure{1, {}}) == "Z");
    CHECK(format_structure(AbelianStructure{0, {{7, 1}}}) == "Z/7");
}
