#include <doctest.h>

#include <vector>

#include "common.hpp"
#include "hall.hpp"
#include "hall_sets.hpp"
#include "witt.hpp"

using nilmult::DomainError;
using nilmult::GroupSpec;
using nilmult::Int;
using nilmult::ResourceError;
using namespace nilmult::hall;

TEST_CASE("two letters, class 3: the five basic commutators in order") {
    auto basis = HallBasis::build(2, 3);
    REQUIRE(basis.size() == 5);
    const char* expected[] = {"x1", "x2", "[x2,x1]", "[[x2,x1],x1]", "[[x2,x1],x2]"};
    for (std::size_t i = 0; i < 5; ++i) CHECK(basis.to_string(i) == expected[i]);
    CHECK(basis.at(0).is_letter());
    CHECK(basis.at(2).weight == 2);
    CHECK(basis.at(2).letters_mask == 0b11);
    CHECK(basis.at(0).letters_mask == 0b01);
    CHECK(basis.at(4).contains(2));
    CHECK_FALSE(basis.at(0).contains(2));
}

TEST_CASE("weight strata sizes equal the Witt numbers") {
    auto basis = HallBasis::build(3, 6);
    for (unsigned w = 1; w <= 6; ++w)
        CHECK(Int(basis.weight_end(w) - basis.weight_begin(w)) == nilmult::witt::chi(w, 3));
    CHECK(basis.weight_begin(7) == basis.size());
}

TEST_CASE("find_pair resolves only basic pairs") {
    auto basis = HallBasis::build(2, 3);
    auto id = basis.find_pair(1, 0);  // [x2, x1]
    REQUIRE(id.has_value());
    CHECK(*id == 2);
    CHECK(basis.find_pair(0, 1) == std::nullopt);  // [x1, x2] is not basic
    CHECK(basis.find_pair(1, 2) == std::nullopt);  // left must exceed right
    CHECK(basis.find_pair(3, 0) == std::nullopt);  // weight 4 exceeds the basis
    auto nested = basis.find_pair(2, 0);
    REQUIRE(nested.has_value());
    CHECK(basis.to_string(*nested) == "[[x2,x1],x1]");
    CHECK(basis.find_pair(2, 1) == 4);  // [[x2,x1],x2]
}

TEST_CASE("slices and the containing-letter filter") {
    auto basis = HallBasis::build(2, 3);
    CHECK(basis.slice(1, 1) == std::vector<std::uint64_t>{0, 1});
    CHECK(basis.slice(2, 3) == std::vector<std::uint64_t>{2, 3, 4});
    auto all = basis.slice(1, 3);
    CHECK(filter_containing(basis, all, 1) == std::vector<std::uint64_t>{0, 2, 3, 4});
    CHECK(filter_containing(basis, all, 2) == std::vector<std::uint64_t>{1, 2, 3, 4});
    CHECK(filter_containing(basis, all, 9).empty());  // absent letter
    CHECK_THROWS_AS(basis.slice(0, 2), DomainError);
    CHECK_THROWS_AS(basis.slice(2, 9), DomainError);  // beyond generated weight
}

TEST_CASE("letter_counts gives per-letter multiplicities, 1-based") {
    auto basis = HallBasis::build(2, 3);
    auto counts = basis.letter_counts(3);  // [[x2,x1],x1]
    REQUIRE(counts.size() == 3);
    CHECK(counts[0] == 0);
    CHECK(counts[1] == 2);
    CHECK(counts[2] == 1);
}

TEST_CASE("enumeration budget is enforced") {
    CHECK_THROWS_AS(HallBasis::build(3, 12, /*budget=*/100), ResourceError);
    CHECK_THROWS_AS(HallBasis::build(0, 3), DomainError);
    CHECK_THROWS_AS(HallBasis::build(2, 0), DomainError);
}

TEST_CASE("factor generator sets: one finite factor") {
    GroupSpec spec{{0, 5}, {2}};  // Z *[2] Z/5
    unsigned c = 2;
    auto basis = basis_for(spec, c);
    CHECK(basis.letters() == 2);
    CHECK(basis.max_weight() == 4);

    auto block = torsion_block(basis, spec, c, 1);
    CHECK(block.base_commutators.size() == 5);  // chi_3 + chi_4 with x2, on 2 letters
    CHECK(block.exponent == 5);
    auto full = torsion_block_full(basis, spec, c, 1);
    CHECK(full.base_commutators == block.base_commutators);

    // per-weight layers partition the block: 2 at weight c+1, 3 at weight c+2
    CHECK(torsion_layer(basis, spec, c, 1, 1).base_commutators.size() == 2);
    CHECK(torsion_layer(basis, spec, c, 2, 1).base_commutators.size() == 3);
}

TEST_CASE("factor generator sets: weight overflow of a later factor") {
    GroupSpec spec{{0, 0, 5}, {2, 1}};  // Z *[2] Z *[1] Z/5
    unsigned c = 2;
    auto basis = basis_for(spec, c);
    auto overflow = overflow_commutators(basis, spec, c, 2);
    CHECK(overflow.size() == 15);  // weight-4 commutators on 3 letters using x3

    auto block = torsion_block(basis, spec, c, 2);
    CHECK(block.base_commutators.size() == 6);  // weight-3 commutators using x3
    auto full = torsion_block_full(basis, spec, c, 2);
    CHECK(full.base_commutators.size() == 21);

    CHECK_THROWS_AS(overflow_commutators(basis, spec, c, 1), DomainError);
    CHECK_THROWS_AS(torsion_block(basis, spec, c, 3), DomainError);
    CHECK_THROWS_AS(torsion_layer(basis, spec, c, 0, 1), DomainError);
    CHECK_THROWS_AS(basis_for(spec, 0), DomainError);
    // a single factor has no joined commutators to enumerate
    auto lone = basis_for(GroupSpec{{5}, {}}, 2);
    CHECK(lone.letters() == 1);
    CHECK_THROWS_AS(torsion_block(lone, GroupSpec{{5}, {}}, 2, 1), DomainError);
}
