// C boundary of the shared library. Every entry point validates its
// pointers, converts the C arguments, delegates to the C++ core, and maps
// exceptions to status codes; no exception or C++ type escapes.

#include "nilmult.h"

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "common.hpp"
#include "groupexpr.hpp"
#include "groupspec.hpp"
#include "hall.hpp"
#include "multiplier.hpp"
#include "verify.hpp"
#include "witt.hpp"

using nilmult::Int;

struct nm_group {
    nilmult::GroupSpec spec;
};

struct nm_structure {
    nilmult::AbelianStructure value;
};

struct nm_hall {
    nilmult::hall::HallBasis basis;
    std::vector<std::uint64_t> ids;
};

namespace {

thread_local std::string t_last_error;

void set_error(std::string message) { t_last_error = std::move(message); }

// Allocated with malloc so nm_string_free stays a plain free.
char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

bool parse_decimal(const char* text, Int& out) {
    if (text == nullptr || *text == '\0') return false;
    const char* p = text;
    if (*p == '-') ++p;
    if (*p == '\0') return false;
    for (; *p != '\0'; ++p)
        if (*p < '0' || *p > '9') return false;
    out = Int(std::string(text));
    return true;
}

nm_status argument_error(const char* message) {
    set_error(message);
    return NM_ERR_ARGUMENT;
}

template <class F>
nm_status guarded(F&& body) noexcept {
    try {
        return body();
    } catch (const nilmult::ParseError& e) {
        set_error(e.what());
        return NM_ERR_PARSE;
    } catch (const nilmult::HypothesisError& e) {
        set_error(e.what());
        return NM_ERR_HYPOTHESIS;
    } catch (const nilmult::DomainError& e) {
        set_error(e.what());
        return NM_ERR_DOMAIN;
    } catch (const nilmult::ResourceError& e) {
        set_error(e.what());
        return NM_ERR_RESOURCE;
    } catch (const nilmult::InternalError& e) {
        set_error(e.what());
        return NM_ERR_INTERNAL;
    } catch (const nlohmann::json::exception& e) {
        set_error(e.what());
        return NM_ERR_DOMAIN;
    } catch (const std::bad_alloc&) {
        set_error("out of memory");
        return NM_ERR_RESOURCE;
    } catch (const std::exception& e) {
        set_error(e.what());
        return NM_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return NM_ERR_INTERNAL;
    }
}

nilmult::ClassRow make_row(const unsigned* classrow, size_t row_len) {
    return nilmult::ClassRow{std::vector<unsigned>(classrow, classrow + row_len)};
}

}  // namespace

extern "C" {

const char* nm_version(void) { return "1.0.0"; }

const char* nm_status_name(nm_status status) {
    switch (status) {
        case NM_OK: return "NM_OK";
        case NM_ERR_ARGUMENT: return "NM_ERR_ARGUMENT";
        case NM_ERR_PARSE: return "NM_ERR_PARSE";
        case NM_ERR_HYPOTHESIS: return "NM_ERR_HYPOTHESIS";
        case NM_ERR_DOMAIN: return "NM_ERR_DOMAIN";
        case NM_ERR_RESOURCE: return "NM_ERR_RESOURCE";
        case NM_ERR_INTERNAL: return "NM_ERR_INTERNAL";
    }
    return "NM_ERR_UNKNOWN";
}

const char* nm_last_error(void) { return t_last_error.c_str(); }

void nm_string_free(char* s) { std::free(s); }

/* ------------------------------------------------------------- groups --- */

nm_status nm_group_parse(const char* text, nm_group** out) {
    if (text == nullptr || out == nullptr) return argument_error("nm_group_parse: null argument");
    return guarded([&] {
        auto spec = nilmult::parse_group_expr(text);
        *out = new nm_group{std::move(spec)};
        return NM_OK;
    });
}

nm_status nm_group_format(const nm_group* group, char** out) {
    if (group == nullptr || out == nullptr)
        return argument_error("nm_group_format: null argument");
    return guarded([&] {
        *out = dup_string(nilmult::format_group(group->spec));
        return NM_OK;
    });
}

void nm_group_free(nm_group* group) { delete group; }

nm_status nm_group_validate(const nm_group* group, const unsigned* classrow, size_t row_len,
                            int* ok, char** report) {
    if (group == nullptr || classrow == nullptr || row_len == 0 || ok == nullptr)
        return argument_error("nm_group_validate: null or empty argument");
    return guarded([&] {
        auto r = nilmult::validate(group->spec, make_row(classrow, row_len));
        if (report != nullptr) {
            std::string text = r.summary();
            for (const std::string& note : r.notes) {
                text += '\n';
                text += note;
            }
            *report = dup_string(text);
        }
        *ok = r.ok ? 1 : 0;
        return NM_OK;
    });
}

/* --------------------------------------------------------- multipliers --- */

nm_status nm_multiplier(const nm_group* group, const unsigned* classrow, size_t row_len,
                        nm_structure** out) {
    if (group == nullptr || classrow == nullptr || row_len == 0 || out == nullptr)
        return argument_error("nm_multiplier: null or empty argument");
    return guarded([&] {
        auto value = nilmult::polynilpotent_multiplier(group->spec, make_row(classrow, row_len));
        *out = new nm_structure{std::move(value)};
        return NM_OK;
    });
}

nm_status nm_iterated_multiplier(const nm_group* group, const unsigned* classrow, size_t row_len,
                                 nm_structure** out) {
    if (group == nullptr || classrow == nullptr || row_len == 0 || out == nullptr)
        return argument_error("nm_iterated_multiplier: null or empty argument");
    return guarded([&] {
        auto value = nilmult::iterated_multiplier(group->spec, make_row(classrow, row_len));
        *out = new nm_structure{std::move(value)};
        return NM_OK;
    });
}

nm_status nm_abelian_multiplier(const char* free_rank, const char* const* moduli,
                                size_t moduli_len, unsigned cls, nm_structure** out) {
    if (free_rank == nullptr || out == nullptr || (moduli == nullptr && moduli_len != 0))
        return argument_error("nm_abelian_multiplier: null argument");
    Int rank;
    if (!parse_decimal(free_rank, rank) || rank < 0)
        return argument_error("nm_abelian_multiplier: free_rank must be a decimal integer >= 0");
    std::vector<Int> orders(moduli_len);
    for (size_t i = 0; i < moduli_len; ++i)
        if (!parse_decimal(moduli[i], orders[i]))
            return argument_error("nm_abelian_multiplier: moduli must be decimal integers");
    return guarded([&] {
        auto value = nilmult::abelian_multiplier(rank, orders, cls);
        *out = new nm_structure{std::move(value)};
        return NM_OK;
    });
}

/* ---------------------------------------------------------- structures --- */

nm_status nm_structure_format(const nm_structure* s, char** out) {
    if (s == nullptr || out == nullptr) return argument_error("nm_structure_format: null argument");
    return guarded([&] {
        *out = dup_string(nilmult::format_structure(s->value));
        return NM_OK;
    });
}

nm_status nm_structure_to_json(const nm_structure* s, char** out) {
    if (s == nullptr || out == nullptr)
        return argument_error("nm_structure_to_json: null argument");
    return guarded([&] {
        *out = dup_string(nilmult::structure_to_json(s->value));
        return NM_OK;
    });
}

nm_status nm_structure_from_json(const char* text, nm_structure** out) {
    if (text == nullptr || out == nullptr)
        return argument_error("nm_structure_from_json: null argument");
    return guarded([&] {
        auto value = nilmult::structure_from_json(text);
        *out = new nm_structure{std::move(value)};
        return NM_OK;
    });
}

nm_status nm_structure_free_rank(const nm_structure* s, char** out) {
    if (s == nullptr || out == nullptr)
        return argument_error("nm_structure_free_rank: null argument");
    return guarded([&] {
        *out = dup_string(s->value.free_rank.str());
        return NM_OK;
    });
}

nm_status nm_structure_torsion_count(const nm_structure* s, size_t* out) {
    if (s == nullptr || out == nullptr)
        return argument_error("nm_structure_torsion_count: null argument");
    *out = s->value.torsion.size();
    return NM_OK;
}

nm_status nm_structure_torsion(const nm_structure* s, size_t index, char** modulus,
                               char** multiplicity) {
    if (s == nullptr || modulus == nullptr || multiplicity == nullptr)
        return argument_error("nm_structure_torsion: null argument");
    if (index >= s->value.torsion.size())
        return argument_error("nm_structure_torsion: index out of range");
    return guarded([&] {
        const auto& block = s->value.torsion[index];
        char* m = dup_string(block.modulus.str());
        char* f = nullptr;
        try {
            f = dup_string(block.multiplicity.str());
        } catch (...) {
            std::free(m);
            throw;
        }
        *modulus = m;
        *multiplicity = f;
        return NM_OK;
    });
}

nm_status nm_structure_equal(const nm_structure* a, const nm_structure* b, int* isomorphic) {
    if (a == nullptr || b == nullptr || isomorphic == nullptr)
        return argument_error("nm_structure_equal: null argument");
    return guarded([&] {
        *isomorphic = a->value.isomorphic_to(b->value) ? 1 : 0;
        return NM_OK;
    });
}

void nm_structure_free(nm_structure* s) { delete s; }

/* ------------------------------------------------------------- scalars --- */

nm_status nm_mobius(uint64_t m, int* out) {
    if (out == nullptr) return argument_error("nm_mobius: null argument");
    return guarded([&] {
        *out = nilmult::arith::mobius(m);
        return NM_OK;
    });
}

nm_status nm_chi(unsigned weight, const char* letters, char** out) {
    if (letters == nullptr || out == nullptr) return argument_error("nm_chi: null argument");
    Int d;
    if (!parse_decimal(letters, d) || d < 0)
        return argument_error("nm_chi: letters must be a decimal integer >= 0");
    return guarded([&] {
        *out = dup_string(nilmult::witt::chi(weight, d).str());
        return NM_OK;
    });
}

nm_status nm_chi_iterate(const char* seed, const unsigned* classes, size_t len, char** out) {
    if (seed == nullptr || out == nullptr || (classes == nullptr && len != 0))
        return argument_error("nm_chi_iterate: null argument");
    Int start;
    if (!parse_decimal(seed, start) || start < 0)
        return argument_error("nm_chi_iterate: seed must be a decimal integer >= 0");
    return guarded([&] {
        std::span<const unsigned> row(classes, len);
        *out = dup_string(nilmult::witt::chi_iterate(start, row).str());
        return NM_OK;
    });
}

/* ---------------------------------------------------- basic commutators --- */

nm_status nm_hall_generate(unsigned letters, unsigned min_weight, unsigned max_weight,
                           unsigned contains_letter, nm_hall** out) {
    if (out == nullptr) return argument_error("nm_hall_generate: null argument");
    return guarded([&] {
        auto basis = nilmult::hall::HallBasis::build(letters, max_weight);
        auto ids = basis.slice(min_weight, max_weight);
        if (contains_letter != 0)
            ids = nilmult::hall::filter_containing(basis, ids, contains_letter);
        *out = new nm_hall{std::move(basis), std::move(ids)};
        return NM_OK;
    });
}

nm_status nm_hall_count(const nm_hall* h, size_t* out) {
    if (h == nullptr || out == nullptr) return argument_error("nm_hall_count: null argument");
    *out = h->ids.size();
    return NM_OK;
}

nm_status nm_hall_item(const nm_hall* h, size_t index, char** out) {
    if (h == nullptr || out == nullptr) return argument_error("nm_hall_item: null argument");
    if (index >= h->ids.size()) return argument_error("nm_hall_item: index out of range");
    return guarded([&] {
        *out = dup_string(h->basis.to_string(h->ids[index]));
        return NM_OK;
    });
}

nm_status nm_hall_item_weight(const nm_hall* h, size_t index, unsigned* out) {
    if (h == nullptr || out == nullptr)
        return argument_error("nm_hall_item_weight: null argument");
    if (index >= h->ids.size()) return argument_error("nm_hall_item_weight: index out of range");
    *out = h->basis.at(h->ids[index]).weight;
    return NM_OK;
}

void nm_hall_free(nm_hall* h) { delete h; }

/* -------------------------------------------------------- verification --- */

nm_status nm_verify(int level, void (*log_line)(const char* line, void* user), void* user,
                    size_t* failed_checks) {
    if (failed_checks == nullptr) return argument_error("nm_verify: null argument");
    if (level != 0 && level != 1) return argument_error("nm_verify: level must be 0 or 1");
    return guarded([&] {
        nilmult::verify::LogFn log;
        if (log_line != nullptr)
            log = [log_line, user](const std::string& line) { log_line(line.c_str(), user); };
        auto results = nilmult::verify::run_all(
            level == 0 ? nilmult::verify::Level::quick : nilmult::verify::Level::full, log);
        *failed_checks = nilmult::verify::failure_count(results);
        return NM_OK;
    });
}

}  // extern "C"
