// Acceptance gate. Every criterion is implemented here directly against the
// library, with its own oracles where the criterion demands independence
// (plain sieves, series products built letter by letter, structures
// assembled from first principles). One line per criterion, exact integer
// comparisons throughout, a runtime cap per criterion. Exit 0 iff all pass.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "common.hpp"
#include "groupexpr.hpp"
#include "groupspec.hpp"
#include "hall.hpp"
#include "hall_sets.hpp"
#include "multiplier.hpp"
#include "nilengine.hpp"
#include "witt.hpp"

using namespace nilmult;
using Clock = std::chrono::steady_clock;
using Fail = std::optional<std::string>;

namespace {

std::string istr(const Int& v) { return v.str(); }

/* ---------------------------------------------------------- criterion 1 --- */
// Witt numbers equal enumerated basic-commutator counts per weight.

Fail witt_hall_agreement() {
    if (witt::chi(6, 2) != 9) return "chi(6,2) != 9";
    if (witt::chi(4, 3) != 18) return "chi(4,3) != 18";
    struct Range {
        unsigned letters;
        unsigned max_weight;
    };
    for (Range r : {Range{1, 8}, Range{2, 8}, Range{3, 8}, Range{4, 5}}) {
        auto basis = hall::HallBasis::build(r.letters, r.max_weight);
        for (unsigned n = 1; n <= r.max_weight; ++n) {
            Int counted = basis.weight_end(n) - basis.weight_begin(n);
            Int predicted = witt::chi(n, r.letters);
            if (counted != predicted)
                return "chi(" + std::to_string(n) + "," + std::to_string(r.letters) + ") = " +
                       istr(predicted) + " but the basis has " + istr(counted) + " commutators";
        }
    }
    return std::nullopt;
}

/* ---------------------------------------------------------- criterion 2 --- */
// Coprimality up to w forces r | C(r, w); checked against a plain sieve.

Fail binomial_divisibility_theorem() {
    auto is_prime = [](unsigned n) {
        if (n < 2) return false;
        for (unsigned d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    };
    std::vector<unsigned> primes;
    for (unsigned p = 2; p <= 200; ++p)
        if (is_prime(p)) primes.push_back(p);

    unsigned holding = 0;
    for (unsigned r = 2; r <= 200; ++r) {
        for (unsigned w = 1; w < r; ++w) {
            bool hypothesis = true;
            for (unsigned p : primes) {
                if (p > w) break;
                if (r % p == 0) {
                    hypothesis = false;
                    break;
                }
            }
            auto cert = arith::binomial_divisibility(w, r);
            if (cert.coprime_hypothesis != hypothesis)
                return "hypothesis flag disagrees with the sieve at (w,r)=(" +
                       std::to_string(w) + "," + std::to_string(r) + ")";
            if (!hypothesis) continue;
            ++holding;
            if (!cert.verified)
                return "certificate not verified at (w,r)=(" + std::to_string(w) + "," +
                       std::to_string(r) + ")";
            if (arith::binomial(r, w) % r != 0)
                return "r does not divide C(r,w) at (w,r)=(" + std::to_string(w) + "," +
                       std::to_string(r) + ")";
        }
    }
    if (holding < 1000) return "unexpectedly few hypothesis-holding pairs";
    return std::nullopt;
}

/* ---------------------------------------------------------- criterion 3 --- */
// Collection agrees with the series embedding on >= 1000 random products,
// and the group axioms hold on >= 1000 random triples.

engine::TruncatedSeries series_of_word(unsigned letters, unsigned cls,
                                       const std::vector<engine::SignedGen>& word) {
    auto s = engine::TruncatedSeries::one(letters, cls);
    for (auto sg : word) {
        auto l = engine::TruncatedSeries::letter(letters, cls, unsigned(sg.gen) + 1);
        s = s.mul(sg.sign == 1 ? l : l.inverse());
    }
    return s;
}

std::vector<engine::SignedGen> random_word(std::mt19937_64& rng, unsigned letters,
                                           unsigned max_len) {
    std::uniform_int_distribution<unsigned> len_d(1, max_len);
    std::uniform_int_distribution<unsigned> gen_d(0, letters - 1);
    std::uniform_int_distribution<int> sign_d(0, 1);
    std::vector<engine::SignedGen> w(len_d(rng));
    for (auto& sg : w) sg = {gen_d(rng), sign_d(rng) == 1 ? 1 : -1};
    return w;
}

Fail collection_against_series_oracle() {
    std::mt19937_64 rng(0xace9'11ce'5eedULL);
    struct Plan {
        unsigned letters;
        unsigned cls;
        unsigned products;
        unsigned max_len;
    };
    const Plan plans[] = {
        {2, 3, 260, 8}, {2, 4, 200, 8}, {2, 5, 120, 6}, {3, 3, 240, 8}, {3, 4, 180, 6}};
    unsigned products = 0;
    for (const Plan& p : plans) {
        engine::Context ctx(p.letters, p.cls);
        for (unsigned trial = 0; trial < p.products; ++trial) {
            auto u = random_word(rng, p.letters, p.max_len);
            auto v = random_word(rng, p.letters, p.max_len);
            auto a = engine::collect_word(ctx, u);
            auto b = engine::collect_word(ctx, v);
            if (engine::magnus_image(a) != series_of_word(p.letters, p.cls, u))
                return "series image of a collected word disagrees with the word's own series "
                       "(letters=" + std::to_string(p.letters) + ", class=" +
                       std::to_string(p.cls) + ", trial=" + std::to_string(trial) + ")";
            std::vector<engine::SignedGen> uv = u;
            uv.insert(uv.end(), v.begin(), v.end());
            if (engine::multiply(a, b) != engine::collect_word(ctx, uv))
                return "product disagrees with concatenation (letters=" +
                       std::to_string(p.letters) + ", class=" + std::to_string(p.cls) +
                       ", trial=" + std::to_string(trial) + ")";
            ++products;
        }
    }
    if (products < 1000) return "fewer than 1000 product trials";

    unsigned triples = 0;
    const Plan axiom_plans[] = {{2, 3, 400, 8}, {3, 3, 300, 7}, {2, 4, 300, 7}};
    for (const Plan& p : axiom_plans) {
        engine::Context ctx(p.letters, p.cls);
        for (unsigned trial = 0; trial < p.products; ++trial) {
            auto a = engine::collect_word(ctx, random_word(rng, p.letters, p.max_len));
            auto b = engine::collect_word(ctx, random_word(rng, p.letters, p.max_len));
            auto c = engine::collect_word(ctx, random_word(rng, p.letters, p.max_len));
            if (engine::multiply(engine::multiply(a, b), c) !=
                engine::multiply(a, engine::multiply(b, c)))
                return "associativity fails";
            if (!engine::multiply(a, engine::inverse(a)).is_identity())
                return "right inverse fails";
            if (engine::multiply(a, engine::identity(ctx)) != a) return "right identity fails";
            if (engine::power(a, 3) != engine::multiply(engine::multiply(a, a), a))
                return "cube disagrees with repeated product";
            ++triples;
        }
    }
    if (triples < 1000) return "fewer than 1000 axiom triples";
    return std::nullopt;
}

/* ---------------------------------------------------------- criterion 4 --- */
// [x2^n, x1] for n = 1..6 in class 4: every exponent is an integer binomial
// combination; the [x2,x1] exponent is n, the [[x2,x1],x2] exponent C(n,2).

Fail power_commutator_expansions() {
    auto fits = engine::power_commutator_fit(6, 4);
    auto basis = hall::HallBasis::build(2, 4);
    auto lead_id = basis.find_pair(1, 0);
    if (!lead_id) return "no [x2,x1] in the class-4 basis";
    auto nested_id = basis.find_pair(*lead_id, 1);
    if (!nested_id) return "no [[x2,x1],x2] in the class-4 basis";

    bool saw_lead = false, saw_nested = false;
    for (const auto& fit : fits) {
        if (fit.observed.size() != 6) return "fit row does not cover n = 1..6";
        unsigned occurrences = basis.letter_counts(fit.id)[2];
        if (fit.coeffs.size() != occurrences)
            return "fit for " + basis.to_string(fit.id) +
                   " does not have one coefficient per x2 occurrence";
        for (unsigned n = 1; n <= 6; ++n) {
            Int value = 0;
            for (std::size_t j = 0; j < fit.coeffs.size(); ++j)
                value += fit.coeffs[j] * arith::binomial(n, unsigned(j + 1));
            if (value != fit.observed[n - 1])
                return "binomial combination misses the observed exponent of " +
                       basis.to_string(fit.id) + " at n=" + std::to_string(n);
        }
        if (fit.id == *lead_id) {
            saw_lead = true;
            for (unsigned n = 1; n <= 6; ++n)
                if (fit.observed[n - 1] != n)
                    return "[x2,x1] exponent at n=" + std::to_string(n) + " is " +
                           istr(fit.observed[n - 1]) + ", not n";
        }
        if (fit.id == *nested_id) {
            saw_nested = true;
            for (unsigned n = 1; n <= 6; ++n)
                if (fit.observed[n - 1] != arith::binomial(n, 2))
                    return "[[x2,x1],x2] exponent at n=" + std::to_string(n) + " is " +
                           istr(fit.observed[n - 1]) + ", not C(n,2)";
        }
    }
    if (!saw_lead || !saw_nested) return "expected fit rows are missing";
    return std::nullopt;
}

/* ---------------------------------------------------------- criterion 5 --- */
// Admissible sweep: the free rank, the per-factor torsion multiplicities and
// the overflow counts add up to the full weight-slice count, and each closed
// form matches direct enumeration.

struct SweepCase {
    GroupSpec spec;
    unsigned c;
};

void descending_tuples(unsigned len, unsigned max_first, std::vector<unsigned>& cur,
                       std::vector<std::vector<unsigned>>& out) {
    if (cur.size() == len) {
        out.push_back(cur);
        return;
    }
    unsigned cap = cur.empty() ? max_first : cur.back();
    for (unsigned v = 1; v <= cap; ++v) {
        cur.push_back(v);
        descending_tuples(len, max_first, cur, out);
        cur.pop_back();
    }
}

std::vector<SweepCase> admissible_sweep() {
    std::vector<SweepCase> cases;
    for (unsigned factors = 2; factors <= 4; ++factors) {
        std::vector<std::vector<unsigned>> rows;
        std::vector<unsigned> cur;
        descending_tuples(factors - 1, 3, cur, rows);
        for (const auto& classes : rows) {
            unsigned n1 = classes[0];
            for (unsigned t = 1; t <= factors; ++t) {
                unsigned tail_len = factors - t;
                std::vector<std::vector<Int>> tails;
                if (tail_len == 0) {
                    tails.emplace_back();
                } else {
                    for (unsigned p : {5u, 3u}) {
                        if (p == 3 && n1 > 2) continue;  // 3 <= n1 breaks coprimality
                        for (unsigned sq = 0; sq <= tail_len; ++sq) {
                            std::vector<Int> tail;
                            for (unsigned i = 0; i < tail_len; ++i)
                                tail.emplace_back(i < sq ? p * p : p);
                            tails.push_back(std::move(tail));
                        }
                    }
                }
                for (const auto& tail : tails) {
                    GroupSpec spec;
                    spec.orders.assign(t, Int(0));
                    spec.orders.insert(spec.orders.end(), tail.begin(), tail.end());
                    spec.classes = classes;
                    for (unsigned c = n1; c <= 4; ++c) cases.push_back({spec, c});
                }
            }
        }
    }
    return cases;
}

Fail counting_identity_sweep() {
    auto cases = admissible_sweep();
    if (cases.size() < 300) return "sweep unexpectedly small";
    std::map<std::pair<unsigned, unsigned>, hall::HallBasis> cache;

    for (const auto& [spec, c] : cases) {
        unsigned k = unsigned(spec.factor_count()) - 1;
        unsigned t = unsigned(spec.infinite_prefix());
        unsigned n1 = spec.classes[0];
        std::string tag = format_group(spec) + " c=" + std::to_string(c);

        auto rep = validate(spec, ClassRow{{c}});
        if (!rep.ok) return tag + " rejected: " + rep.summary();

        auto key = std::make_pair(k + 1, c + n1);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, hall::HallBasis::build(key.first, key.second)).first;
        const hall::HallBasis& basis = it->second;

        Int u = free_rank_count(spec, c);
        Int fsum = 0, esum = 0;
        for (unsigned i = std::max(t, 1u); i <= k; ++i) {
            Int fi = torsion_block_count(spec, c, i);
            auto block = hall::torsion_block(basis, spec, c, i);
            if (fi != Int(block.base_commutators.size()))
                return tag + " torsion multiplicity f_" + std::to_string(i) + " = " + istr(fi) +
                       " but enumeration finds " + std::to_string(block.base_commutators.size());
            if (block.exponent != spec.orders[i]) return tag + " block exponent mismatch";
            fsum += fi;
        }
        for (unsigned i = 2; i <= k; ++i) {
            Int ei = overflow_count(spec, c, i);
            auto overflow = hall::overflow_commutators(basis, spec, c, i);
            if (ei != Int(overflow.size()))
                return tag + " overflow count at i=" + std::to_string(i) + " = " + istr(ei) +
                       " but enumeration finds " + std::to_string(overflow.size());
            esum += ei;
        }
        Int rhs = 0;
        for (unsigned j = 1; j <= n1; ++j) rhs += witt::chi(c + j, k + 1);
        if (u + fsum + esum != rhs)
            return tag + " ledger " + istr(u) + " + " + istr(fsum) + " + " + istr(esum) +
                   " != " + istr(rhs);
    }
    return std::nullopt;
}

/* ---------------------------------------------------------- criterion 6 --- */
// Class 1 on finite divisor chains reproduces the classical multiplier
// Z_{m_2} + Z_{m_3}^2 + ... built here from first principles.

Fail classical_multipliers() {
    std::vector<std::vector<Int>> chains;
    for (unsigned m = 2; m <= 100; ++m) {
        chains.push_back({Int(m)});
        for (unsigned d = 2; d < m; ++d)
            if (m % d == 0) chains.push_back({Int(m), Int(d)});
    }
    chains.push_back({8, 4, 2});
    chains.push_back({27, 9, 3});
    chains.push_back({100, 50, 10});
    chains.push_back({16, 8, 4, 2});
    chains.push_back({96, 48, 24, 12});
    chains.push_back({32, 16, 8, 4, 2});
    chains.push_back({64, 32, 16, 8, 2});
    if (chains.size() < 50) return "fewer than 50 divisor chains";

    for (const auto& chain : chains) {
        AbelianStructure expected;
        for (std::size_t i = 2; i <= chain.size(); ++i)
            expected.torsion.push_back({chain[i - 1], Int(i - 1)});
        auto computed = abelian_multiplier(0, chain, 1);
        if (!computed.isomorphic_to(expected)) {
            std::string tag;
            for (const auto& m : chain) tag += istr(m) + " ";
            return "chain " + tag + "gives " + format_structure(computed) + ", expected " +
                   format_structure(expected);
        }
    }
    return std::nullopt;
}

/* ---------------------------------------------------------- criterion 7 --- */
// Closed-form row computation equals the stepwise route on the sweep.

Fail route_equivalence() {
    auto spec0 = parse_group_expr("Z *[2] Z");
    ClassRow frozen{{2, 1}};
    if (format_structure(polynilpotent_multiplier(spec0, frozen)) != "Z^10")
        return "Z *[2] Z with row (2,1) is not Z^10";

    auto cases = admissible_sweep();
    for (const auto& [spec, c] : cases) {
        for (unsigned e2 = 0; e2 <= 2; ++e2) {
            for (unsigned e3 = 0; e3 <= 2; ++e3) {
                if (e2 == 0 && e3 != 0) continue;
                ClassRow row{{c}};
                if (e2 != 0) row.classes.push_back(e2);
                if (e3 != 0) row.classes.push_back(e3);
                auto direct = polynilpotent_multiplier(spec, row);
                auto stepwise = iterated_multiplier(spec, row);
                if (!direct.isomorphic_to(stepwise)) {
                    std::string tag = format_group(spec) + " row";
                    for (unsigned x : row.classes) tag += " " + std::to_string(x);
                    return tag + ": " + format_structure(direct) + " != " +
                           format_structure(stepwise);
                }
            }
        }
    }
    return std::nullopt;
}

/* ---------------------------------------------------------- criterion 8 --- */
// Hypothesis reports are exact: the violating prime is named, admissible
// inputs pass.

Fail hypothesis_reports() {
    auto bad_prime = validate(parse_group_expr("Z *[2] Z/4"), ClassRow{{2}});
    if (bad_prime.ok) return "Z *[2] Z/4 accepted at class 2";
    if (bad_prime.violations !=
        std::vector<Violation>{{ViolationKind::PrimeConditionViolated, 2}})
        return "Z *[2] Z/4 report is not exactly PrimeConditionViolated(2), got: " +
               bad_prime.summary();

    auto bad_order = validate(parse_group_expr("Z *[1] Z *[2] Z/5"), ClassRow{{2}});
    if (bad_order.violations != std::vector<Violation>{{ViolationKind::ClassesNotDescending, 0}})
        return "Z *[1] Z *[2] Z/5 report is not exactly ClassesNotDescending, got: " +
               bad_order.summary();

    auto fine = validate(parse_group_expr("Z *[2] Z/5"), ClassRow{{2}});
    if (!fine.ok || !fine.violations.empty())
        return "Z *[2] Z/5 rejected at class 2: " + fine.summary();
    return std::nullopt;
}

/* ---------------------------------------------------------- criterion 9 --- */
// The installed command line computes the worked four-factor example.

Fail cli_end_to_end() {
    std::string command = std::string("\"") + NM_CLI_PATH +
                          "\" multiplier --group \"Z *[2] Z *[2] Z/5 *[1] Z/5\" --classrow 2 "
                          "2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) return "failed to start the command line tool";
    std::string output;
    char buffer[256];
    std::size_t got;
    while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, got);
    int status = pclose(pipe);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
        return "tool exited with status " + std::to_string(status);
    if (output != "Z^5 + (Z/5)^21 + (Z/5)^12\n")
        return "stdout was \"" + output + "\", expected \"Z^5 + (Z/5)^21 + (Z/5)^12\\n\"";
    return std::nullopt;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        unsigned cap_ms;
        Fail (*run)();
    };
    const Criterion criteria[] = {
        {"witt-hall-agreement", 10'000, witt_hall_agreement},
        {"binomial-divisibility", 1'000, binomial_divisibility_theorem},
        {"collection-series-oracle", 30'000, collection_against_series_oracle},
        {"power-commutator-expansions", 5'000, power_commutator_expansions},
        {"counting-identity-sweep", 60'000, counting_identity_sweep},
        {"classical-multipliers", 1'000, classical_multipliers},
        {"route-equivalence", 30'000, route_equivalence},
        {"hypothesis-reports", 1'000, hypothesis_reports},
        {"cli-end-to-end", 1'000, cli_end_to_end},
    };

    bool all_ok = true;
    int number = 0;
    for (const Criterion& criterion : criteria) {
        ++number;
        auto start = Clock::now();
        Fail outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome = std::string("unexpected exception: ") + e.what();
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start)
                      .count();
        if (!outcome && ms > criterion.cap_ms)
            outcome = "runtime " + std::to_string(ms) + " ms exceeds the " +
                      std::to_string(criterion.cap_ms) + " ms cap";
        if (outcome) {
            all_ok = false;
            std::printf("FAIL %d %s (%lld ms): %s\n", number, criterion.name,
                        static_cast<long long>(ms), outcome->c_str());
        } else {
            std::printf("pass %d %s (%lld ms)\n", number, criterion.name,
                        static_cast<long long>(ms));
        }
    }
    return all_ok ? 0 : 1;
}
