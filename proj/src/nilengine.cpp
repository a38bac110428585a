#include "nilengine.hpp"

#include <algorithm>
#include <list>
#include <set>
#include <sstream>
#include <tuple>

#include "arith.hpp"

namespace nilmult::engine {

namespace {

std::vector<SignedGen> inverted(const std::vector<SignedGen>& w) {
    std::vector<SignedGen> out(w.rbegin(), w.rend());
    for (SignedGen& sg : out) sg.sign = -sg.sign;
    return out;
}

}  // namespace

Context::Context(unsigned letters, unsigned cls, std::uint64_t collect_budget,
                 std::uint64_t letter_budget)
    : basis_(hall::HallBasis::build(letters, cls)),
      collect_budget_(collect_budget),
      letter_budget_(letter_budget) {}

const std::vector<SignedGen>& Context::letter_word(std::uint64_t id) const {
    std::lock_guard lock(memo_mutex_);
    // pairs reference smaller ids, so a bottom-up fill terminates
    std::vector<std::uint64_t> need{id};
    while (!need.empty()) {
        std::uint64_t i = need.back();
        if (i >= basis_.size()) throw DomainError("engine: basis index out of range");
        if (word_memo_.count(i)) {
            need.pop_back();
            continue;
        }
        const hall::BasicCommutator& bc = basis_.at(i);
        if (bc.is_letter()) {
            word_memo_[i] = {{i, +1}};
            need.pop_back();
            continue;
        }
        auto l = word_memo_.find(bc.left), r = word_memo_.find(bc.right);
        if (l == word_memo_.end() || r == word_memo_.end()) {
            if (l == word_memo_.end()) need.push_back(bc.left);
            if (r == word_memo_.end()) need.push_back(bc.right);
            continue;
        }
        std::vector<SignedGen> w = inverted(l->second);
        std::vector<SignedGen> ir = inverted(r->second);
        w.insert(w.end(), ir.begin(), ir.end());
        w.insert(w.end(), l->second.begin(), l->second.end());
        w.insert(w.end(), r->second.begin(), r->second.end());
        word_memo_[i] = std::move(w);
        need.pop_back();
    }
    return word_memo_.at(id);
}

NilElement::NilElement(const Context& ctx, std::vector<std::pair<std::uint64_t, Int>> exps)
    : ctx_(&ctx) {
    exps_.reserve(exps.size());
    std::uint64_t prev = 0;
    bool first = true;
    for (auto& [id, e] : exps) {
        if (id >= ctx.basis().size()) throw DomainError("engine: basis index out of range");
        if (!first && id <= prev) throw DomainError("engine: exponents not ascending");
        prev = id;
        first = false;
        if (e != 0) exps_.emplace_back(id, std::move(e));
    }
}

Int NilElement::exponent_of(std::uint64_t id) const {
    for (const auto& [i, e] : exps_)
        if (i == id) return e;
    return 0;
}

std::string NilElement::to_string() const {
    if (exps_.empty()) return "e";
    std::ostringstream out;
    bool first = true;
    for (const auto& [id, e] : exps_) {
        if (!first) out << " ";
        first = false;
        out << ctx_->basis().to_string(id);
        if (e != 1) out << "^" << e;
    }
    return out.str();
}

NilElement identity(const Context& ctx) { return NilElement(ctx); }

NilElement generator(const Context& ctx, unsigned letter) {
    if (letter < 1 || letter > ctx.letters())
        throw DomainError("engine: letter out of range");
    return NilElement(ctx, {{letter - 1, Int(1)}});
}

namespace {

// exponent-run word: product of basis-element powers in list order
struct Run {
    std::uint64_t gen;
    Int exp;
};
using RunWord = std::vector<Run>;

RunWord reversed_negated(const RunWord& w) {
    RunWord out(w.rbegin(), w.rend());
    for (Run& r : out) r.exp = -r.exp;
    return out;
}

// Commutator and conjugation words are facts of the group shape alone, so
// they are shared across all contexts with equal (letters, class).
struct ShapeCache {
    std::mutex mu;
    std::map<std::pair<std::uint64_t, std::uint64_t>, RunWord> comm;      // [u,v]
    std::map<std::pair<std::uint64_t, std::uint64_t>, RunWord> comm_inv;  // [u,v^-1]
    std::map<std::tuple<std::uint64_t, Int, std::uint64_t, Int>, RunWord> conj;
};

ShapeCache& shape_cache(const Context& ctx) {
    static std::mutex mu;
    static std::map<std::pair<unsigned, unsigned>, ShapeCache> caches;
    std::lock_guard lock(mu);
    return caches[{ctx.letters(), ctx.cls()}];
}

// From-the-left collection on exponent runs. Crossing a whole run uses the
// exact rewrite u^f v^e = v^e (v^-e u^f v^e); the conjugate is again a run
// word with leading run u^f and a strictly heavier tail, so every pass
// moves weight upward until the class truncates it.
struct Collector {
    const Context& ctx;
    ShapeCache& cache;
    std::uint64_t steps = 0;
    unsigned depth = 0;
    std::set<std::pair<std::uint64_t, std::uint64_t>> building;

    explicit Collector(const Context& c) : ctx(c), cache(shape_cache(c)) {}

    void charge(std::uint64_t k = 1) {
        steps += k;
        if (steps > ctx.collect_budget())
            throw ResourceError("engine: collection budget exceeded");
    }

    unsigned weight(std::uint64_t id) const { return ctx.basis().at(id).weight; }

    RunWord collect(RunWord w) { return collect(std::list<Run>(w.begin(), w.end())); }

    RunWord collect(std::list<Run> word) {
        if (++depth > 512) throw ResourceError("engine: collection recursion too deep");
        // canonicalise: drop zero exponents, merge adjacent equal generators
        for (auto it = word.begin(); it != word.end();) {
            if (it->exp == 0) {
                it = word.erase(it);
                continue;
            }
            if (it != word.begin()) {
                auto p = std::prev(it);
                if (p->gen == it->gen) {
                    it->exp += p->exp;
                    word.erase(p);
                    if (it->exp == 0) it = word.erase(it);
                    continue;
                }
            }
            ++it;
        }
        RunWord out;
        while (!word.empty()) {
            std::uint64_t v = word.front().gen;
            for (const Run& r : word) v = std::min(v, r.gen);
            Int net = 0;
            while (true) {
                auto it = std::find_if(word.begin(), word.end(),
                                       [v](const Run& r) { return r.gen == v; });
                if (it == word.end()) break;
                while (it != word.begin()) {
                    auto pit = std::prev(it);
                    if (pit->gen <= v)
                        throw InternalError("engine: collection order invariant broken");
                    charge();
                    if (weight(pit->gen) + weight(v) > ctx.cls()) {
                        word.splice(pit, word, it);  // commutes modulo the class
                        merge_forward(word, pit, it);
                        continue;
                    }
                    RunWord rep = conj_pow(pit->gen, pit->exp, v, it->exp);
                    word.splice(pit, word, it);
                    auto pos = word.erase(pit);
                    for (const Run& r : rep) {
                        charge();
                        word.insert(pos, r);
                    }
                    if (pos != word.end() && pos != word.begin()) merge_forward(word, std::prev(pos), it);
                }
                net += it->exp;
                word.erase(it);
            }
            if (net != 0) out.push_back({v, std::move(net)});
        }
        --depth;
        return out;
    }

    // merge the run at `a` with its successor while the pair matches,
    // erasing cancellations; never touches `keep`
    void merge_forward(std::list<Run>& word, std::list<Run>::iterator a,
                       std::list<Run>::iterator keep) {
        while (a != word.end()) {
            auto b = std::next(a);
            if (b == word.end() || a == keep || b == keep || a->gen != b->gen) return;
            b->exp += a->exp;
            word.erase(a);
            if (b->exp != 0) return;
            auto nxt = word.erase(b);  // cancellation may expose a fresh equal pair
            if (nxt == word.begin()) return;
            a = std::prev(nxt);
        }
    }

    RunWord mul(const RunWord& a, const RunWord& b) {
        std::list<Run> cat(a.begin(), a.end());
        cat.insert(cat.end(), b.begin(), b.end());
        return collect(std::move(cat));
    }

    RunWord inv(const RunWord& w) { return collect(reversed_negated(w)); }

    RunWord pow(const RunWord& w, const Int& f) {
        if (f == 0 || w.empty()) return {};
        if (f < 0) return pow(inv(w), -f);
        RunWord acc;
        RunWord base = collect(w);
        Int n = f;
        while (n > 0) {
            charge();
            if ((n & 1) != 0) acc = mul(acc, base);
            n >>= 1;
            if (n > 0) base = mul(base, base);
        }
        return acc;
    }

    // [u, v] in normal form; requires u > v and weight sum within the class.
    // Non-basic pairs reduce through components: for u = [s,t] with t > v,
    // [u,v] = u^-1 [s^v, t^v], and both component conjugates recurse on
    // strictly lighter left arguments.
    RunWord comm_word(std::uint64_t u, std::uint64_t v) {
        std::pair key{u, v};
        {
            std::lock_guard lock(cache.mu);
            auto hit = cache.comm.find(key);
            if (hit != cache.comm.end()) return hit->second;
        }
        if (!building.insert(key).second)
            throw InternalError("engine: commutator word recursion cycle");
        RunWord out;
        if (auto c = ctx.basis().find_pair(u, v)) {
            out = {{*c, 1}};
        } else {
            const hall::BasicCommutator& bu = ctx.basis().at(u);
            if (bu.is_letter()) throw InternalError("engine: letter pair missing from basis");
            RunWord s = conj_pow(static_cast<std::uint64_t>(bu.left), 1, v, 1);
            RunWord t = conj_pow(static_cast<std::uint64_t>(bu.right), 1, v, 1);
            std::list<Run> cat;
            cat.push_back({u, -1});
            for (const RunWord* part : {&s, &t}) {
                RunWord r = reversed_negated(*part);
                cat.insert(cat.end(), r.begin(), r.end());
            }
            cat.insert(cat.end(), s.begin(), s.end());
            cat.insert(cat.end(), t.begin(), t.end());
            out = collect(std::move(cat));
        }
        building.erase(key);
        std::lock_guard lock(cache.mu);
        return cache.comm.emplace(std::move(key), std::move(out)).first->second;
    }

    // [u, v^-1] = ([u,v]^(v^-1))^-1; the conjugation recurses only on
    // strictly heavier left arguments, so the class bounds the depth
    RunWord comm_inv_word(std::uint64_t u, std::uint64_t v) {
        std::pair key{u, v};
        {
            std::lock_guard lock(cache.mu);
            auto hit = cache.comm_inv.find(key);
            if (hit != cache.comm_inv.end()) return hit->second;
        }
        RunWord out = inv(conj_many(comm_word(u, v), v, Int(-1)));
        std::lock_guard lock(cache.mu);
        return cache.comm_inv.emplace(std::move(key), std::move(out)).first->second;
    }

    // w conjugated by v^e, divide and conquer on e
    RunWord conj_many(RunWord w, std::uint64_t v, const Int& e) {
        if (e == 0 || w.empty()) return w;
        if (e == 1 || e == -1) {
            int s = e > 0 ? 1 : -1;
            std::list<Run> cat;
            for (const Run& r : w) {
                charge();
                RunWord c = conj_pow(r.gen, r.exp, v, Int(s));
                cat.insert(cat.end(), c.begin(), c.end());
            }
            return collect(std::move(cat));
        }
        Int half = e / 2;
        return conj_many(conj_many(std::move(w), v, half), v, e - half);
    }

    // v^-e u^f v^e as a collected word; u > v
    RunWord conj_pow(std::uint64_t u, const Int& f, std::uint64_t v, const Int& e) {
        if (f == 0) return {};
        if (e == 0 || weight(u) + weight(v) > ctx.cls()) return {{u, f}};
        std::tuple<std::uint64_t, Int, std::uint64_t, Int> key{u, f, v, e};
        {
            std::lock_guard lock(cache.mu);
            auto hit = cache.conj.find(key);
            if (hit != cache.conj.end()) return hit->second;
        }
        RunWord out;
        if (e == 1 || e == -1) {
            RunWord base{{u, 1}};
            RunWord tail = e > 0 ? comm_word(u, v) : comm_inv_word(u, v);
            base.insert(base.end(), tail.begin(), tail.end());
            out = pow(base, f);
        } else {
            Int half = e / 2;
            out = conj_many(conj_pow(u, f, v, half), v, e - half);
        }
        std::lock_guard lock(cache.mu);
        return cache.conj.emplace(std::move(key), std::move(out)).first->second;
    }
};

RunWord runs_of(const NilElement& a) {
    RunWord w;
    w.reserve(a.exponents().size());
    for (const auto& [id, e] : a.exponents()) w.push_back({id, e});
    return w;
}

std::vector<std::pair<std::uint64_t, Int>> pairs_of(RunWord w) {
    std::vector<std::pair<std::uint64_t, Int>> out;
    out.reserve(w.size());
    for (Run& r : w) out.emplace_back(r.gen, std::move(r.exp));
    return out;
}

void require_same_shape(const NilElement& a, const NilElement& b) {
    if (!a.context().same_shape(b.context()))
        throw DomainError("engine: context mismatch");
}

}  // namespace

NilElement collect_word(const Context& ctx, std::vector<SignedGen> input) {
    if (input.size() > ctx.letter_budget())
        throw ResourceError("engine: expansion budget exceeded");
    std::list<Run> word;
    for (const SignedGen& sg : input) {
        if (sg.gen >= ctx.basis().size()) throw DomainError("engine: basis index out of range");
        if (sg.sign != 1 && sg.sign != -1) throw DomainError("engine: sign must be +-1");
        word.push_back({sg.gen, Int(sg.sign)});
    }
    Collector col(ctx);
    return NilElement(ctx, pairs_of(col.collect(std::move(word))));
}

NilElement multiply(const NilElement& a, const NilElement& b) {
    require_same_shape(a, b);
    Collector col(a.context());
    return NilElement(a.context(), pairs_of(col.mul(runs_of(a), runs_of(b))));
}

NilElement inverse(const NilElement& a) {
    Collector col(a.context());
    return NilElement(a.context(), pairs_of(col.inv(runs_of(a))));
}

NilElement commutator(const NilElement& a, const NilElement& b) {
    require_same_shape(a, b);
    RunWord ra = runs_of(a), rb = runs_of(b);
    RunWord ia = reversed_negated(ra), ib = reversed_negated(rb);
    std::list<Run> cat(ia.begin(), ia.end());
    cat.insert(cat.end(), ib.begin(), ib.end());
    cat.insert(cat.end(), ra.begin(), ra.end());
    cat.insert(cat.end(), rb.begin(), rb.end());
    Collector col(a.context());
    return NilElement(a.context(), pairs_of(col.collect(std::move(cat))));
}

NilElement power(const NilElement& a, const Int& e) {
    Collector col(a.context());
    return NilElement(a.context(), pairs_of(col.pow(runs_of(a), e)));
}

TruncatedSeries TruncatedSeries::one(unsigned letters, unsigned max_degree) {
    TruncatedSeries s(letters, max_degree);
    s.set(std::string(), 1);
    return s;
}

TruncatedSeries TruncatedSeries::letter(unsigned letters, unsigned max_degree, unsigned i) {
    if (i < 1 || i > letters) throw DomainError("series: letter out of range");
    TruncatedSeries s = one(letters, max_degree);
    if (max_degree >= 1) s.set(std::string(1, static_cast<char>(i)), 1);
    return s;
}

Int TruncatedSeries::coefficient(const std::string& word) const {
    auto it = coef_.find(word);
    return it == coef_.end() ? Int(0) : it->second;
}

void TruncatedSeries::set(std::string word, Int value) {
    if (word.size() > max_degree_) throw DomainError("series: word beyond max degree");
    for (char ch : word)
        if (ch < 1 || static_cast<unsigned>(ch) > letters_)
            throw DomainError("series: bad symbol in word");
    if (value == 0)
        coef_.erase(word);
    else
        coef_[std::move(word)] = std::move(value);
}

TruncatedSeries TruncatedSeries::mul(const TruncatedSeries& other) const {
    if (letters_ != other.letters_ || max_degree_ != other.max_degree_)
        throw DomainError("series: context mismatch");
    TruncatedSeries out(letters_, max_degree_);
    for (const auto& [wa, ca] : coef_) {
        for (const auto& [wb, cb] : other.coef_) {
            if (wa.size() + wb.size() > max_degree_) continue;
            Int& slot = out.coef_[wa + wb];
            slot += ca * cb;
        }
    }
    std::erase_if(out.coef_, [](const auto& kv) { return kv.second == 0; });
    return out;
}

TruncatedSeries TruncatedSeries::inverse() const {
    Int c0 = constant_term();
    if (c0 != 1 && c0 != -1)
        throw DomainError("series: inverse needs constant term +-1");
    // (c0 + T)^-1 = c0 * sum_j (-c0 T)^j since T^(max_degree+1) vanishes
    TruncatedSeries t = *this;
    t.set(std::string(), 0);  // T
    TruncatedSeries neg_c0t(letters_, max_degree_);
    for (const auto& [w, c] : t.coef_) neg_c0t.coef_[w] = c * -c0;
    TruncatedSeries acc = one(letters_, max_degree_);
    TruncatedSeries pow_term = one(letters_, max_degree_);
    for (unsigned j = 1; j <= max_degree_; ++j) {
        pow_term = pow_term.mul(neg_c0t);
        if (pow_term.coef_.empty()) break;
        for (const auto& [w, c] : pow_term.coef_) {
            Int& slot = acc.coef_[w];
            slot += c;
        }
    }
    std::erase_if(acc.coef_, [](const auto& kv) { return kv.second == 0; });
    if (c0 == 1) return acc;
    TruncatedSeries out(letters_, max_degree_);
    for (const auto& [w, c] : acc.coef_) out.coef_[w] = -c;
    return out;
}

TruncatedSeries TruncatedSeries::pow(const Int& e) const {
    if (e == 0) return one(letters_, max_degree_);
    TruncatedSeries base = e < 0 ? inverse() : *this;
    Int n = e < 0 ? Int(-e) : e;
    TruncatedSeries acc = one(letters_, max_degree_);
    while (n > 0) {
        if ((n & 1) != 0) acc = acc.mul(base);
        n >>= 1;
        if (n > 0) base = base.mul(base);
    }
    return acc;
}

std::string TruncatedSeries::to_string() const {
    if (coef_.empty()) return "0";
    std::vector<std::pair<std::string, Int>> terms(coef_.begin(), coef_.end());
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        return std::make_pair(a.first.size(), a.first) < std::make_pair(b.first.size(), b.first);
    });
    std::ostringstream out;
    bool first = true;
    for (const auto& [w, c] : terms) {
        Int mag = c < 0 ? Int(-c) : c;
        if (first) {
            if (c < 0) out << "-";
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (mag != 1 || w.empty()) out << mag;
        for (char ch : w) out << "X" << static_cast<int>(ch);
    }
    return out.str();
}

namespace {

using SeriesKey = std::tuple<unsigned, unsigned, std::uint64_t>;

const TruncatedSeries& base_series(const Context& ctx, std::uint64_t id) {
    static std::mutex mu;
    static std::map<SeriesKey, TruncatedSeries> cache;
    std::lock_guard lock(mu);
    SeriesKey key{ctx.letters(), ctx.cls(), id};
    auto found = cache.find(key);
    if (found != cache.end()) return found->second;

    // build bottom-up: pairs reference smaller ids
    std::vector<std::uint64_t> need{id};
    while (!need.empty()) {
        std::uint64_t i = need.back();
        SeriesKey k{ctx.letters(), ctx.cls(), i};
        if (cache.count(k)) {
            need.pop_back();
            continue;
        }
        const hall::BasicCommutator& bc = ctx.basis().at(i);
        if (bc.is_letter()) {
            cache.emplace(k, TruncatedSeries::letter(ctx.letters(), ctx.cls(), bc.letter));
            need.pop_back();
            continue;
        }
        SeriesKey kl{ctx.letters(), ctx.cls(), static_cast<std::uint64_t>(bc.left)};
        SeriesKey kr{ctx.letters(), ctx.cls(), static_cast<std::uint64_t>(bc.right)};
        auto l = cache.find(kl), r = cache.find(kr);
        if (l == cache.end() || r == cache.end()) {
            if (l == cache.end()) need.push_back(bc.left);
            if (r == cache.end()) need.push_back(bc.right);
            continue;
        }
        TruncatedSeries s =
            l->second.inverse().mul(r->second.inverse()).mul(l->second).mul(r->second);
        cache.emplace(k, std::move(s));
        need.pop_back();
    }
    return cache.at(key);
}

}  // namespace

TruncatedSeries magnus_image(const NilElement& a) {
    const Context& ctx = a.context();
    TruncatedSeries acc = TruncatedSeries::one(ctx.letters(), ctx.cls());
    for (const auto& [id, e] : a.exponents()) acc = acc.mul(base_series(ctx, id).pow(e));
    return acc;
}

namespace {

// exact solve of f(arg) = sum_{j=1..J} coef_j C(arg, j) through the
// observations at args 1..J, then verification at every observation
std::vector<Int> fit_binomials(const std::vector<long long>& args,
                               const std::vector<Int>& observed, unsigned J,
                               const std::string& label) {
    auto value_at = [&](long long a) -> const Int& {
        for (std::size_t i = 0; i < args.size(); ++i)
            if (args[i] == a) return observed[i];
        throw DomainError("expansion fit: argument list must contain 1.." + std::to_string(J));
    };
    std::vector<Int> coef(J);
    for (unsigned a = 1; a <= J; ++a) {
        Int rhs = value_at(a);
        for (unsigned j = 1; j < a; ++j)
            rhs -= coef[j - 1] * arith::binomial(Int(a), Int(j));
        coef[a - 1] = rhs;  // C(a, a) = 1
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
        Int s = 0;
        for (unsigned j = 1; j <= J; ++j)
            s += coef[j - 1] * arith::binomial_integer(Int(args[i]), j);
        if (s != observed[i])
            throw InternalError("expansion fit failed for " + label + " at argument " +
                                std::to_string(args[i]));
    }
    return coef;
}

std::vector<ExpansionFit> expansion_family_fit(const Context& ctx,
                                               const std::vector<long long>& args,
                                               const std::vector<NilElement>& forms,
                                               unsigned count_letter) {
    // union of basis elements appearing anywhere in the family
    std::vector<std::uint64_t> ids;
    for (const NilElement& e : forms)
        for (const auto& [id, ex] : e.exponents()) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    std::vector<ExpansionFit> rows;
    for (std::uint64_t id : ids) {
        if (ctx.basis().at(id).is_letter())
            throw InternalError("expansion fit: letter survived in a commutator expansion");
        ExpansionFit row;
        row.id = id;
        for (const NilElement& e : forms) row.observed.push_back(e.exponent_of(id));
        unsigned J = ctx.basis().letter_counts(id)[count_letter];
        row.coeffs = fit_binomials(args, row.observed, J, ctx.basis().to_string(id));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::vector<ExpansionFit> power_commutator_fit(unsigned n_max, unsigned cls,
                                               std::uint64_t collect_budget) {
    if (cls < 3) throw DomainError("expansion fit: class must be at least 3");
    if (n_max < 1) throw DomainError("expansion fit: need n_max >= 1");
    Context ctx(2, cls, collect_budget);
    NilElement x1 = generator(ctx, 1), x2 = generator(ctx, 2);
    std::vector<long long> args;
    std::vector<NilElement> forms;
    for (unsigned n = 1; n <= n_max; ++n) {
        args.push_back(n);
        forms.push_back(commutator(power(x2, Int(n)), x1));
    }
    return expansion_family_fit(ctx, args, forms, 2);
}

std::vector<ExpansionFit> power_argument_fit(std::span<const long long> alphas, unsigned cls,
                                             std::uint64_t collect_budget) {
    if (cls < 3) throw DomainError("expansion fit: class must be at least 3");
    Context ctx(2, cls, collect_budget);
    NilElement x1 = generator(ctx, 1), x2 = generator(ctx, 2);
    std::vector<long long> args(alphas.begin(), alphas.end());
    std::vector<NilElement> forms;
    for (long long a : args) forms.push_back(commutator(x2, power(x1, Int(a))));
    return expansion_family_fit(ctx, args, forms, 1);
}

}  // namespace nilmult::engine
