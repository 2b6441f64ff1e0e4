#ifndef VOALAB_H
#define VOALAB_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum VoalabStatus {
  VOALAB_STATUS_OK = 0,
  VOALAB_STATUS_NULL_POINTER = 1,
  VOALAB_STATUS_INVALID_UTF8 = 2,
  VOALAB_STATUS_INVALID_RANK = 3,
  VOALAB_STATUS_UNSUPPORTED_RANK = 4,
  VOALAB_STATUS_INDEX = 5,
  VOALAB_STATUS_PRECONDITION = 6,
  VOALAB_STATUS_PARSE = 7,
  VOALAB_STATUS_UNKNOWN_GENERATOR = 8,
  VOALAB_STATUS_SINGULAR_LATTICE = 9,
  VOALAB_STATUS_INTERNAL = 10,
  VOALAB_STATUS_PANIC = 11,
} VoalabStatus;

/**
 * A Lie (super)algebra with its structure tables.
 */
typedef struct VoalabAlgebra VoalabAlgebra;

/**
 * A state of the vacuum module together with the algebra it lives over.
 */
typedef struct VoalabState VoalabState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call into the library on the same thread.
 */
const char *voalab_last_error(void);

/**
 * Release a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void voalab_string_free(char *s);

/**
 * `psl(n|n)` for `n >= 2`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum VoalabStatus voalab_algebra_psl(size_t n, struct VoalabAlgebra **out);

/**
 * `sl(n)` for `n >= 2`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum VoalabStatus voalab_algebra_sl(size_t n, struct VoalabAlgebra **out);

/**
 * # Safety
 * `alg` must come from a constructor above and not have been freed.
 */
void voalab_algebra_free(struct VoalabAlgebra *alg);

/**
 * # Safety
 * `alg` must be a live handle, `out` valid for writes.
 */
enum VoalabStatus voalab_algebra_dim(const struct VoalabAlgebra *alg, size_t *out);

/**
 * Exhaustive antisymmetry, Jacobi and invariance check.
 *
 * # Safety
 * `alg` must be a live handle, `passed` valid for writes.
 */
enum VoalabStatus voalab_structure_check(const struct VoalabAlgebra *alg, bool *passed);

/**
 * Parse a state such as `"E[1,3](-1) E[1,4](-1)"` at level `num/den`.
 *
 * # Safety
 * `alg` must be a live handle, `src` a nul-terminated string, `out` valid
 * for writes.
 */
enum VoalabStatus voalab_state_parse(const struct VoalabAlgebra *alg,
                                     int64_t level_num,
                                     int64_t level_den,
                                     const char *src,
                                     struct VoalabState **out);

/**
 * One of the named level-one vectors `"chi"`, `"chi+"`, `"chi-"`.
 *
 * # Safety
 * `alg` must be a live handle, `name` a nul-terminated string, `out` valid
 * for writes.
 */
enum VoalabStatus voalab_state_named(const struct VoalabAlgebra *alg,
                                     const char *name,
                                     struct VoalabState **out);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void voalab_state_free(struct VoalabState *s);

/**
 * Apply an operator word (rightmost token first) and return a new state.
 *
 * # Safety
 * `s` must be a live handle, `word` a nul-terminated string, `out` valid
 * for writes.
 */
enum VoalabStatus voalab_state_apply_word(const struct VoalabState *s,
                                          const char *word,
                                          struct VoalabState **out);

/**
 * `true` iff `s` is killed by the positive affine part. Errors on
 * inhomogeneous states.
 *
 * # Safety
 * `s` must be a live handle, `singular` valid for writes.
 */
enum VoalabStatus voalab_state_is_singular(const struct VoalabState *s, bool *singular);

/**
 * # Safety
 * `s` must be a live handle, `is_zero` valid for writes.
 */
enum VoalabStatus voalab_state_is_zero(const struct VoalabState *s, bool *is_zero);

/**
 * Canonical text of the state; release with [`voalab_string_free`].
 *
 * # Safety
 * `s` must be a live handle, `out` valid for writes.
 */
enum VoalabStatus voalab_state_to_string(const struct VoalabState *s, char **out);

/**
 * Reduced C2 image of the state with the top block set to zero, as text.
 *
 * # Safety
 * `s` must be a live handle, `out` valid for writes.
 */
enum VoalabStatus voalab_state_c2_bottom(const struct VoalabState *s, char **out);

/**
 * Whether the u-vectors of `psl(n|n)` cover every 2x2 minor.
 *
 * # Safety
 * `covered` must be valid for writes.
 */
enum VoalabStatus voalab_minor_cover(size_t n, bool *covered);

/**
 * Split an integer weight of length `len` into `lambda0` and its class
 * `j`. `lambda0` is written as a reduced fraction.
 *
 * # Safety
 * `lambda` must point to `len` readable values; the outputs must be valid
 * for writes.
 */
enum VoalabStatus voalab_decompose_weight(const int64_t *lambda,
                                          size_t len,
                                          int64_t *lambda0_num,
                                          int64_t *lambda0_den,
                                          uint64_t *j);

/**
 * Run the certification suite. `config_json` may be null for defaults.
 * The JSON report goes to `report` (release with [`voalab_string_free`]).
 *
 * # Safety
 * `config_json` must be null or a nul-terminated string; the outputs must
 * be valid for writes.
 */
enum VoalabStatus voalab_run_suite(const char *config_json, bool *all_passed, char **report);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* VOALAB_H */
