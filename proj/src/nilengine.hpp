#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "hall.hpp"

namespace nilmult::engine {

constexpr std::uint64_t kDefaultCollectBudget = 50'000'000;  // swap steps
constexpr std::uint64_t kDefaultLetterBudget = 1u << 20;     // expanded word length

struct SignedGen {
    std::uint64_t gen;  // order index into the context basis
    int sign;           // +1 or -1
};

// The free nilpotent group of class `cls` on `letters` generators: the Hall
// basis plus cached letter expansions of its elements. Immutable after
// construction apart from internal memo tables (mutex-guarded).
class Context {
  public:
    Context(unsigned letters, unsigned cls,
            std::uint64_t collect_budget = kDefaultCollectBudget,
            std::uint64_t letter_budget = kDefaultLetterBudget);

    const hall::HallBasis& basis() const { return basis_; }
    unsigned letters() const { return basis_.letters(); }
    unsigned cls() const { return basis_.max_weight(); }
    std::uint64_t collect_budget() const { return collect_budget_; }
    std::uint64_t letter_budget() const { return letter_budget_; }

    // Signed letter word of a basis element: a letter is itself, a pair
    // [a, b] expands to a^-1 b^-1 a b.
    const std::vector<SignedGen>& letter_word(std::uint64_t id) const;

    bool same_shape(const Context& other) const {
        return letters() == other.letters() && cls() == other.cls();
    }

    Context(const Context&) = delete;
    Context& operator=(const Context&) = delete;

  private:
    hall::HallBasis basis_;
    std::uint64_t collect_budget_;
    std::uint64_t letter_budget_;
    mutable std::mutex memo_mutex_;
    mutable std::map<std::uint64_t, std::vector<SignedGen>> word_memo_;
};

// Group element in normal form: product of basis elements in ascending
// order-index order, nonzero exponents only.
class NilElement {
  public:
    explicit NilElement(const Context& ctx) : ctx_(&ctx) {}
    NilElement(const Context& ctx, std::vector<std::pair<std::uint64_t, Int>> exps);

    const Context& context() const { return *ctx_; }
    const std::vector<std::pair<std::uint64_t, Int>>& exponents() const { return exps_; }
    bool is_identity() const { return exps_.empty(); }

    // exponent of one basis element (0 when absent)
    Int exponent_of(std::uint64_t id) const;

    // "x1^2 x2^2 [x2,x1]"; identity prints "e"
    std::string to_string() const;

    bool operator==(const NilElement& other) const {
        return ctx_->same_shape(*other.ctx_) && exps_ == other.exps_;
    }

  private:
    const Context* ctx_;
    std::vector<std::pair<std::uint64_t, Int>> exps_;

    friend NilElement collect_word(const Context&, std::vector<SignedGen>);
};

NilElement identity(const Context& ctx);
NilElement generator(const Context& ctx, unsigned letter);  // x_letter, 1-based

// Normal form of a signed generator word (collection from the left, least
// generator first, truncating above the context class).
NilElement collect_word(const Context& ctx, std::vector<SignedGen> word);

NilElement multiply(const NilElement& a, const NilElement& b);
NilElement inverse(const NilElement& a);
NilElement commutator(const NilElement& a, const NilElement& b);  // a^-1 b^-1 a b
NilElement power(const NilElement& a, const Int& e);

// Truncated power series with integer coefficients over noncommuting
// symbols X_1..X_d, words of length <= max_degree. Words are stored as
// byte strings of 1-based letter indices.
class TruncatedSeries {
  public:
    TruncatedSeries(unsigned letters, unsigned max_degree)
        : letters_(letters), max_degree_(max_degree) {}

    static TruncatedSeries one(unsigned letters, unsigned max_degree);
    static TruncatedSeries letter(unsigned letters, unsigned max_degree, unsigned i);  // 1 + X_i

    unsigned letters() const { return letters_; }
    unsigned max_degree() const { return max_degree_; }
    const std::map<std::string, Int>& coefficients() const { return coef_; }
    Int coefficient(const std::string& word) const;
    Int constant_term() const { return coefficient(std::string()); }

    TruncatedSeries mul(const TruncatedSeries& other) const;
    TruncatedSeries inverse() const;  // requires constant term 1 or -1
    TruncatedSeries pow(const Int& e) const;

    void set(std::string word, Int value);  // drops zeros

    // deterministic rendering, e.g. "1 + X2X1 - X1X2"
    std::string to_string() const;

    bool operator==(const TruncatedSeries& other) const {
        return letters_ == other.letters_ && max_degree_ == other.max_degree_ &&
               coef_ == other.coef_;
    }

  private:
    unsigned letters_;
    unsigned max_degree_;
    std::map<std::string, Int> coef_;  // no zero values stored
};

// Image under x_i -> 1 + X_i truncated at the context class; injective on
// the group, hence the engine's independent oracle.
TruncatedSeries magnus_image(const NilElement& a);

// One basis element's exponents across an expansion family, with the exact
// binomial-combination fit f(arg) = sum_j coeffs[j-1] * C(arg, j).
struct ExpansionFit {
    std::uint64_t id = 0;          // basis element
    std::vector<Int> observed;     // exponent at each argument, input order
    std::vector<Int> coeffs;       // fitted a_1..a_J
};

// Normal forms of [x2^n, x1] for n = 1..n_max in the class-`cls` group on
// two letters. For every basis element appearing, fits its exponents to an
// integer binomial combination with J = (number of x2 occurrences); throws
// InternalError when no exact fit exists. The [x2,x1] row always fits n.
std::vector<ExpansionFit> power_commutator_fit(unsigned n_max, unsigned cls,
                                               std::uint64_t collect_budget = kDefaultCollectBudget);

// Same for [x2, x1^alpha] over the given alpha values (must contain 1..J
// for every occurring J = number of x1 occurrences); generalized binomials
// handle negative alphas.
std::vector<ExpansionFit> power_argument_fit(std::span<const long long> alphas, unsigned cls,
                                             std::uint64_t collect_budget = kDefaultCollectBudget);

}  // namespace nilmult::engine
