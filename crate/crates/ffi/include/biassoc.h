#ifndef BIASSOC_H
#define BIASSOC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Face poset families.
 */
typedef enum BiassocFamily {
  /**
   * Permutahedron of dimension m - 1 (n is ignored).
   */
  BIASSOC_FAMILY_PERMUTAHEDRON = 0,
  BIASSOC_FAMILY_BIPERMUTAHEDRON = 1,
  /**
   * Associahedron on m leaves (n is ignored).
   */
  BIASSOC_FAMILY_ASSOCIAHEDRON = 2,
  BIASSOC_FAMILY_BIASSOCIAHEDRON = 3,
  /**
   * Multiplihedron on m leaves (n is ignored).
   */
  BIASSOC_FAMILY_MULTIPLIHEDRON = 4,
} BiassocFamily;

/**
 * Outcome of a call.
 */
typedef enum BiassocStatus {
  BIASSOC_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  BIASSOC_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  BIASSOC_STATUS_INVALID_UTF8 = 2,
  /**
   * Text could not be parsed.
   */
  BIASSOC_STATUS_PARSE = 3,
  /**
   * A size or index argument is out of range.
   */
  BIASSOC_STATUS_DOMAIN = 4,
  /**
   * The input parsed but violates a structural condition.
   */
  BIASSOC_STATUS_INVALID = 5,
  /**
   * An unexpected internal failure; the library state is still usable.
   */
  BIASSOC_STATUS_INTERNAL = 6,
} BiassocStatus;

/**
 * A complementary pair of leveled trees.
 */
typedef struct BiassocPair BiassocPair;

/**
 * A finite poset with string keys.
 */
typedef struct BiassocPoset BiassocPoset;

/**
 * A term of the free prop on one generator per biarity.
 */
typedef struct BiassocTerm BiassocTerm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the library version as a static string. Do not free it.
 */
const char *biassoc_version(void);

/**
 * Returns a copy of the last error message on this thread, or null if the
 * last call succeeded. Release it with `biassoc_string_free`.
 */
char *biassoc_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` is null or was returned by this library and not yet freed.
 */
void biassoc_string_free(char *s);

/**
 * Parses a pair such as `((* *)3 *)1 ~ (* *)2`.
 *
 * # Safety
 * `text` is a NUL-terminated string and `out` is valid for one write.
 */
enum BiassocStatus biassoc_pair_parse(const char *text, struct BiassocPair **out);

/**
 * Decodes an ordered bipartition such as `(4|57|12|36)` of biarity (m, n).
 *
 * # Safety
 * `text` is a NUL-terminated string and `out` is valid for one write.
 */
enum BiassocStatus biassoc_pair_from_gamma(const char *text,
                                           uintptr_t m,
                                           uintptr_t n,
                                           struct BiassocPair **out);

/**
 * Releases a pair. Null is ignored.
 *
 * # Safety
 * `pair` is null or was returned by this library and not yet freed.
 */
void biassoc_pair_free(struct BiassocPair *pair);

/**
 * Writes the biarity (m, n) of a pair.
 *
 * # Safety
 * `pair` is a live handle and both out pointers are valid for one write.
 */
enum BiassocStatus biassoc_pair_biarity(const struct BiassocPair *pair, uintptr_t *m, uintptr_t *n);

/**
 * Formats a pair in its text form.
 *
 * # Safety
 * `pair` is a live handle and `out` is valid for one write.
 */
enum BiassocStatus biassoc_pair_to_string(const struct BiassocPair *pair, char **out);

/**
 * Encodes a pair as an ordered bipartition, e.g. `(4|57|12|36)`.
 *
 * # Safety
 * `pair` is a live handle and `out` is valid for one write.
 */
enum BiassocStatus biassoc_pair_gamma(const struct BiassocPair *pair, char **out);

/**
 * Builds the prop term assigned to a pair.
 *
 * # Safety
 * `pair` is a live handle and `out` is valid for one write.
 */
enum BiassocStatus biassoc_pair_varpi(const struct BiassocPair *pair, struct BiassocTerm **out);

/**
 * Parses and evaluates a term expression such as `V(x[1,2], H(x[2,1], 1))`.
 *
 * # Safety
 * `text` is a NUL-terminated string and `out` is valid for one write.
 */
enum BiassocStatus biassoc_term_parse(const char *text, struct BiassocTerm **out);

/**
 * Releases a term. Null is ignored.
 *
 * # Safety
 * `term` is null or was returned by this library and not yet freed.
 */
void biassoc_term_free(struct BiassocTerm *term);

/**
 * Writes the numbers of outputs and inputs of a term.
 *
 * # Safety
 * `term` is a live handle and both out pointers are valid for one write.
 */
enum BiassocStatus biassoc_term_biarity(const struct BiassocTerm *term,
                                        uintptr_t *outputs,
                                        uintptr_t *inputs);

/**
 * Sets `out` to whether two terms are isomorphic graphs.
 *
 * # Safety
 * `a` and `b` are live handles and `out` is valid for one write.
 */
enum BiassocStatus biassoc_term_equal(const struct BiassocTerm *a,
                                      const struct BiassocTerm *b,
                                      bool *out);

/**
 * Sets `out` to whether a term is special.
 *
 * # Safety
 * `term` is a live handle and `out` is valid for one write.
 */
enum BiassocStatus biassoc_term_is_special(const struct BiassocTerm *term, bool *out);

/**
 * Serializes a term as JSON.
 *
 * # Safety
 * `term` is a live handle and `out` is valid for one write.
 */
enum BiassocStatus biassoc_term_to_json(const struct BiassocTerm *term, char **out);

/**
 * Builds the face poset of a family. Sizes with m + n above the
 * tractability bound are rejected.
 *
 * # Safety
 * `out` is valid for one write.
 */
enum BiassocStatus biassoc_poset_new(enum BiassocFamily family,
                                     uintptr_t m,
                                     uintptr_t n,
                                     struct BiassocPoset **out);

/**
 * Releases a poset. Null is ignored.
 *
 * # Safety
 * `poset` is null or was returned by this library and not yet freed.
 */
void biassoc_poset_free(struct BiassocPoset *poset);

/**
 * Returns the number of elements, or 0 for a null handle.
 *
 * # Safety
 * `poset` is null or a live handle.
 */
uintptr_t biassoc_poset_len(const struct BiassocPoset *poset);

/**
 * Writes the text key of element `i`.
 *
 * # Safety
 * `poset` is a live handle and `out` is valid for one write.
 */
enum BiassocStatus biassoc_poset_key(const struct BiassocPoset *poset, uintptr_t i, char **out);

/**
 * Sets `out` to whether element `i` is below or equal to element `j`.
 *
 * # Safety
 * `poset` is a live handle and `out` is valid for one write.
 */
enum BiassocStatus biassoc_poset_leq(const struct BiassocPoset *poset,
                                     uintptr_t i,
                                     uintptr_t j,
                                     bool *out);

/**
 * Copies up to `capacity` entries of the f-vector into `buffer` and writes
 * its full length to `len`. `buffer` may be null when `capacity` is 0.
 *
 * # Safety
 * `poset` is a live handle, `buffer` is valid for `capacity` writes and
 * `len` is valid for one write.
 */
enum BiassocStatus biassoc_poset_fvector(const struct BiassocPoset *poset,
                                         uintptr_t *buffer,
                                         uintptr_t capacity,
                                         uintptr_t *len);

/**
 * Writes the Euler characteristic of a graded poset.
 *
 * # Safety
 * `poset` is a live handle and `out` is valid for one write.
 */
enum BiassocStatus biassoc_poset_euler(const struct BiassocPoset *poset, int64_t *out);

/**
 * Sets `out` to whether two posets are isomorphic.
 *
 * # Safety
 * `a` and `b` are live handles and `out` is valid for one write.
 */
enum BiassocStatus biassoc_poset_isomorphic(const struct BiassocPoset *a,
                                            const struct BiassocPoset *b,
                                            bool *out);

/**
 * Serializes a poset as JSON with its elements and cover relations.
 *
 * # Safety
 * `poset` is a live handle and `out` is valid for one write.
 */
enum BiassocStatus biassoc_poset_to_json(const struct BiassocPoset *poset, char **out);

/**
 * Checks that the opet map induces an isomorphism for biarity (m, n).
 *
 * # Safety
 * `out` is valid for one write.
 */
enum BiassocStatus biassoc_check_opet(uintptr_t m, uintptr_t n, bool *out);

/**
 * Checks that the term map and the zone projection have the same kernel
 * on pairs of biarity (m, n).
 *
 * # Safety
 * `out` is valid for one write.
 */
enum BiassocStatus biassoc_check_kernels(uintptr_t m, uintptr_t n, bool *out);

/**
 * Checks that zone pairs of biarity (m, 2) form the multiplihedron.
 *
 * # Safety
 * `out` is valid for one write.
 */
enum BiassocStatus biassoc_check_multiplihedron(uintptr_t m, bool *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BIASSOC_H */
