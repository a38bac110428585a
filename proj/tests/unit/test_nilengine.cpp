#include <doctest.h>

#include <string>
#include <vector>

#include "arith.hpp"
#include "common.hpp"
#include "nilengine.hpp"

using nilmult::DomainError;
using nilmult::Int;
using nilmult::ResourceError;
using namespace nilmult::engine;

TEST_CASE("collection to normal form") {
    Context ctx(2, 3);
    auto sq = collect_word(ctx, {{0, 1}, {1, 1}, {0, 1}, {1, 1}});
    CHECK(sq.to_string() == "x1^2 x2^2 [x2,x1] [[x2,x1],x2]");
    CHECK(sq.exponent_of(2) == 1);
    CHECK(sq.exponent_of(3) == 0);
    CHECK(collect_word(ctx, {}).is_identity());
    CHECK(identity(ctx).to_string() == "e");
}

TEST_CASE("operations agree with word concatenation") {
    Context ctx(2, 3);
    auto a = collect_word(ctx, {{0, 1}, {1, 1}});
    auto b = collect_word(ctx, {{1, 1}, {0, -1}});
    CHECK(multiply(a, b) == collect_word(ctx, {{0, 1}, {1, 1}, {1, 1}, {0, -1}}));
    CHECK(multiply(a, inverse(a)).is_identity());
    CHECK(power(a, 3) == multiply(multiply(a, a), a));
    CHECK(power(a, -2) == inverse(multiply(a, a)));
    CHECK(power(a, 0) == identity(ctx));
}

TEST_CASE("commutator convention [a,b] = a^-1 b^-1 a b") {
    Context ctx(2, 2);
    auto c21 = commutator(generator(ctx, 2), generator(ctx, 1));
    CHECK(c21.to_string() == "[x2,x1]");
    CHECK(commutator(generator(ctx, 1), generator(ctx, 2)) == inverse(c21));
    CHECK(commutator(generator(ctx, 1), generator(ctx, 1)).is_identity());
}

TEST_CASE("powers with huge exponents stay exact") {
    Context ctx(2, 2);
    Int big("100000000000000000000");
    auto p = power(generator(ctx, 1), big);
    CHECK(p.exponent_of(0) == big);
    CHECK(power(p, -1).exponent_of(0) == -big);
}

TEST_CASE("the series embedding respects the group operations") {
    Context ctx(2, 3);
    auto a = collect_word(ctx, {{0, 1}, {1, 1}});
    auto b = collect_word(ctx, {{1, 1}, {0, 1}});
    CHECK(magnus_image(a) != magnus_image(b));  // xy != yx already in class 2
    CHECK(magnus_image(multiply(a, b)) == magnus_image(a).mul(magnus_image(b)));
    CHECK(magnus_image(inverse(a)) == magnus_image(a).inverse());
    CHECK(magnus_image(generator(ctx, 1)) == TruncatedSeries::letter(2, 3, 1));
    CHECK(magnus_image(identity(ctx)) == TruncatedSeries::one(2, 3));
}

TEST_CASE("series arithmetic") {
    auto one = TruncatedSeries::one(2, 3);
    auto l1 = TruncatedSeries::letter(2, 3, 1);
    CHECK(l1.constant_term() == 1);
    CHECK(l1.coefficient(std::string(1, char(1))) == 1);
    CHECK(l1.mul(l1.inverse()) == one);
    CHECK(l1.pow(3).coefficient(std::string(1, char(1))) == 3);
    CHECK(l1.pow(3).coefficient(std::string(3, char(1))) == 1);
    CHECK(l1.pow(-2) == l1.inverse().mul(l1.inverse()));
    CHECK(l1.coefficient(std::string(4, char(1))) == 0);  // absent words read as zero
    TruncatedSeries s(2, 3);
    s.set(std::string(1, char(2)), 5);
    s.set(std::string(1, char(2)), 0);  // zeros are dropped
    CHECK(s.coefficients().empty());
    CHECK_THROWS_AS(s.set(std::string(4, char(1)), 1), DomainError);  // beyond degree
    CHECK_THROWS_AS(s.set(std::string(1, char(9)), 1), DomainError);  // unknown symbol
}

TEST_CASE("power-of-generator commutator fits") {
    auto fits = power_commutator_fit(5, 3);
    const ExpansionFit* lead = nullptr;   // [x2,x1]
    const ExpansionFit* nested = nullptr; // [[x2,x1],x2]
    for (const auto& f : fits) {
        if (f.id == 2) lead = &f;
        if (f.id == 4) nested = &f;
        CHECK(f.id != 3);  // [[x2,x1],x1] never appears in [x2^n, x1]
    }
    REQUIRE(lead != nullptr);
    CHECK(lead->observed == std::vector<Int>{1, 2, 3, 4, 5});
    CHECK(lead->coeffs == std::vector<Int>{1});
    REQUIRE(nested != nullptr);
    CHECK(nested->coeffs == std::vector<Int>{0, 1});  // exactly C(n,2)
}

TEST_CASE("powered-argument fits handle negative exponents") {
    std::vector<long long> alphas{1, 2, 3, -1, -2};
    auto fits = power_argument_fit(alphas, 3);
    bool saw_lead = false;
    for (const auto& f : fits) {
        // re-evaluate the fit at every argument
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            Int value = 0;
            for (std::size_t j = 0; j < f.coeffs.size(); ++j)
                value += f.coeffs[j] * nilmult::arith::binomial_integer(alphas[i], unsigned(j + 1));
            CHECK(value == f.observed[i]);
        }
        if (f.id == 2) {
            saw_lead = true;
            CHECK(f.coeffs == std::vector<Int>{1});
            CHECK(f.observed == std::vector<Int>{1, 2, 3, -1, -2});
        }
        if (f.id == 3) CHECK(f.coeffs == std::vector<Int>{0, 1});
    }
    CHECK(saw_lead);
}

TEST_CASE("argument validation and budgets") {
    CHECK_THROWS_AS(Context(0, 3), DomainError);
    CHECK_THROWS_AS(Context(2, 0), DomainError);
    Context ctx(2, 3);
    CHECK_THROWS_AS(generator(ctx, 0), DomainError);
    CHECK_THROWS_AS(generator(ctx, 3), DomainError);
    CHECK_THROWS_AS(collect_word(ctx, {{0, 2}}), DomainError);
    CHECK_THROWS_AS(collect_word(ctx, {{7, 1}}), DomainError);
    CHECK_THROWS_AS(NilElement(ctx, {{1, 1}, {0, 1}}), DomainError);  // not ascending
    CHECK_THROWS_AS(
        [] {
            Context tight(2, 3, /*collect_budget=*/3);
            collect_word(tight, {{1, 1}, {0, 1}, {1, 1}, {0, 1}, {1, 1}, {0, 1}});
        }(),
        ResourceError);
    CHECK_THROWS_AS(power_commutator_fit(3, 2), DomainError);  // class must be >= 3
    std::vector<long long> missing_one{2, 3};
    CHECK_THROWS_AS(power_argument_fit(missing_one, 3), DomainError);
}
