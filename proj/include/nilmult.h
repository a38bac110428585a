#ifndef NILMULT_H
#define NILMULT_H

/* C interface to the nilpotent-multiplier library.
 *
 * All arbitrary-precision values cross this boundary as decimal strings.
 * Every char** output is a fresh allocation owned by the caller; release it
 * with nm_string_free. Handles are released with their matching _free
 * function. Functions returning nm_status leave outputs untouched on
 * failure; the failure message is readable via nm_last_error on the same
 * thread until the next failing call.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NM_API __declspec(dllexport)
#else
#define NM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nm_status {
    NM_OK = 0,
    NM_ERR_ARGUMENT = 1,   /* null pointer or malformed value at this boundary */
    NM_ERR_PARSE = 2,      /* group-expression syntax error */
    NM_ERR_HYPOTHESIS = 3, /* closed-form preconditions violated */
    NM_ERR_DOMAIN = 4,     /* other precondition violation */
    NM_ERR_RESOURCE = 5,   /* enumeration or rewriting budget exceeded */
    NM_ERR_INTERNAL = 6    /* checked invariant failed: a library bug */
} nm_status;

typedef struct nm_group nm_group;         /* product of cyclic groups */
typedef struct nm_structure nm_structure; /* finitely generated abelian group */
typedef struct nm_hall nm_hall;           /* enumerated basic commutators */

NM_API const char* nm_version(void);
NM_API const char* nm_status_name(nm_status status);

/* Message of the most recent failure on this thread ("" when none). */
NM_API const char* nm_last_error(void);

NM_API void nm_string_free(char* s);

/* ------------------------------------------------------------- groups --- */

/* Grammar: expr := factor ( "*[" CLASS "]" factor )*, factor := "Z" or
 * "Z/ORDER" with ORDER >= 2, e.g. "Z *[2] Z/5". */
NM_API nm_status nm_group_parse(const char* text, nm_group** out);
NM_API nm_status nm_group_format(const nm_group* group, char** out);
NM_API void nm_group_free(nm_group* group);

/* Checks the closed-form preconditions for the class row c_1,...,c_s.
 * *ok is 1/0; *report (optional, may be NULL) receives newline-separated
 * lines: first the violation summary ("ok" when none), then any notes. */
NM_API nm_status nm_group_validate(const nm_group* group, const unsigned* classrow,
                                   size_t row_len, int* ok, char** report);

/* --------------------------------------------------------- multipliers --- */

/* Multiplier of the group for the class row: row length 1 computes the
 * class-c multiplier, longer rows the closed-form iterated multiplier.
 * Fails with NM_ERR_HYPOTHESIS when the preconditions do not hold. */
NM_API nm_status nm_multiplier(const nm_group* group, const unsigned* classrow,
                               size_t row_len, nm_structure** out);

/* Same result computed stepwise (one multiplier per row entry); an
 * independent route kept for cross-checking. */
NM_API nm_status nm_iterated_multiplier(const nm_group* group, const unsigned* classrow,
                                        size_t row_len, nm_structure** out);

/* Class-c multiplier of Z^free_rank + Z/moduli[0] + ...; moduli must form a
 * divisor chain (each divides the one before it). Decimal strings. */
NM_API nm_status nm_abelian_multiplier(const char* free_rank, const char* const* moduli,
                                       size_t moduli_len, unsigned cls, nm_structure** out);

/* ---------------------------------------------------------- structures --- */

/* "Z^5 + (Z/5)^21 + (Z/5)^12"; "0" for the trivial group. */
NM_API nm_status nm_structure_format(const nm_structure* s, char** out);

/* {"schema":1,"free_rank":...,"torsion":[{"modulus":...,"multiplicity":...}]} */
NM_API nm_status nm_structure_to_json(const nm_structure* s, char** out);

/* Inverse of nm_structure_to_json; malformed or out-of-contract documents
 * fail with NM_ERR_DOMAIN. */
NM_API nm_status nm_structure_from_json(const char* text, nm_structure** out);

NM_API nm_status nm_structure_free_rank(const nm_structure* s, char** out);
NM_API nm_status nm_structure_torsion_count(const nm_structure* s, size_t* out);
NM_API nm_status nm_structure_torsion(const nm_structure* s, size_t index, char** modulus,
                                      char** multiplicity);

/* Isomorphism test: adjacent torsion blocks with equal moduli are merged
 * before comparison. *isomorphic is 1/0. */
NM_API nm_status nm_structure_equal(const nm_structure* a, const nm_structure* b,
                                    int* isomorphic);
NM_API void nm_structure_free(nm_structure* s);

/* ------------------------------------------------------------- scalars --- */

/* Moebius function; *out is -1, 0 or 1. Requires m >= 1. */
NM_API nm_status nm_mobius(uint64_t m, int* out);

/* Number of basic commutators of the given weight on `letters` letters
 * (letters is a decimal string >= 0). */
NM_API nm_status nm_chi(unsigned weight, const char* letters, char** out);

/* chi_{classes[len-1]+1}(...chi_{classes[0]+1}(seed)...); empty composition
 * returns the seed. */
NM_API nm_status nm_chi_iterate(const char* seed, const unsigned* classes, size_t len,
                                char** out);

/* ---------------------------------------------------- basic commutators --- */

/* All basic commutators on x_1..x_letters with weight in
 * [min_weight, max_weight], in the library's total order. When
 * contains_letter is nonzero, only those in which that letter appears. */
NM_API nm_status nm_hall_generate(unsigned letters, unsigned min_weight, unsigned max_weight,
                                  unsigned contains_letter, nm_hall** out);
NM_API nm_status nm_hall_count(const nm_hall* h, size_t* out);

/* Bracket form, e.g. "[[x2,x1],x1]". */
NM_API nm_status nm_hall_item(const nm_hall* h, size_t index, char** out);
NM_API nm_status nm_hall_item_weight(const nm_hall* h, size_t index, unsigned* out);
NM_API void nm_hall_free(nm_hall* h);

/* -------------------------------------------------------- verification --- */

/* Runs the library's self-verification suites. level 0 is the quick pass,
 * level 1 the full pass. log_line (optional) receives one progress line per
 * suite. *failed_checks receives the total number of failed checks; the
 * call itself returns NM_OK whenever the suites ran to completion. */
NM_API nm_status nm_verify(int level, void (*log_line)(const char* line, void* user),
                           void* user, size_t* failed_checks);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NILMULT_H */
