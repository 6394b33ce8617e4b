#ifndef TORICPROJ_H
#define TORICPROJ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which random choice [`tp_problem_pin`] fixes.
 */
typedef enum TpPin {
  /**
   * Values of the specialized variables.
   */
  TP_PIN_B = 0,
  /**
   * Separating form, one coefficient per variable.
   */
  TP_PIN_LAMBDA = 1,
  /**
   * Projection form, one coefficient per variable.
   */
  TP_PIN_MU = 2,
  /**
   * Expansion point of the free variables.
   */
  TP_PIN_XI = 3,
} TpPin;

/**
 * Outcome of a call.
 */
typedef enum TpStatus {
  TP_STATUS_OK = 0,
  /**
   * The computation failed (degenerate input, exhausted retries,
   * failed verification).
   */
  TP_STATUS_MATH_FAILURE = 1,
  /**
   * Malformed input text.
   */
  TP_STATUS_PARSE_ERROR = 2,
  /**
   * Null pointer, wrong length or out-of-range argument.
   */
  TP_STATUS_INVALID_ARGUMENT = 3,
  /**
   * Internal error; the library state is unaffected.
   */
  TP_STATUS_PANIC = 4,
} TpStatus;

/**
 * A parsed projection problem.
 */
typedef struct TpProblem TpProblem;

/**
 * The outcome of a projection.
 */
typedef struct TpResult TpResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a system file. The file must set `ell`.
 *
 * # Safety
 * `text` is a NUL-terminated string and `out` a valid pointer.
 */
enum TpStatus tp_problem_parse(const char *text, struct TpProblem **out);

/**
 * # Safety
 * `problem` is null or a handle from [`tp_problem_parse`] not yet freed.
 */
void tp_problem_free(struct TpProblem *problem);

/**
 * Seeds the random choices of the projection.
 *
 * # Safety
 * `problem` is a live handle.
 */
enum TpStatus tp_problem_set_seed(struct TpProblem *problem, uint64_t seed);

/**
 * Fixes one random choice to `len` given values instead of drawing it.
 * Lengths are checked when the projection runs.
 *
 * # Safety
 * `problem` is a live handle and `values` points to `len` integers.
 */
enum TpStatus tp_problem_pin(struct TpProblem *problem,
                             enum TpPin which,
                             const int64_t *values,
                             size_t len);

/**
 * Runs the projection.
 *
 * # Safety
 * `problem` is a live handle and `out` a valid pointer.
 */
enum TpStatus tp_project(const struct TpProblem *problem, struct TpResult **out);

/**
 * Parses a resolution file.
 *
 * # Safety
 * `text` is a NUL-terminated string and `out` a valid pointer.
 */
enum TpStatus tp_result_parse(const char *text, struct TpResult **out);

/**
 * Degree of the projected resolution, or 0 for a dense image.
 *
 * # Safety
 * `result` is a live handle and `out` a valid pointer.
 */
enum TpStatus tp_result_degree(const struct TpResult *result, size_t *out);

/**
 * Renders a result as a resolution file, or as `key=value` lines when
 * `structured` is set. Release the string with [`tp_string_free`].
 *
 * # Safety
 * `result` is a live handle and `out` a valid pointer.
 */
enum TpStatus tp_result_emit(const struct TpResult *result, bool structured, char **out);

/**
 * # Safety
 * `result` is null or a live handle.
 */
void tp_result_free(struct TpResult *result);

/**
 * Mixed volume of the supports in a system file with `simplices` copies
 * of the standard simplex appended.
 *
 * # Safety
 * `system` is a NUL-terminated string and `out` a valid pointer.
 */
enum TpStatus tp_mixed_volume(const char *system, size_t simplices, uint64_t *out);

/**
 * Transcendence basis of the supports in a system file as 0-based
 * variable indices. `len` receives the basis size; when it exceeds
 * `capacity` nothing is written to `indices` and the call fails with
 * `TP_STATUS_INVALID_ARGUMENT`.
 *
 * # Safety
 * `system` is a NUL-terminated string, `indices` has room for `capacity`
 * entries and `len` is a valid pointer.
 */
enum TpStatus tp_trans_basis(const char *system, size_t *indices, size_t capacity, size_t *len);

/**
 * Audits a resolution file against its system file. Returns
 * `TP_STATUS_OK` when every identity holds and `TP_STATUS_MATH_FAILURE`
 * otherwise; in both cases `report` (if not null) receives one
 * `name: pass|FAIL` line per identity.
 *
 * # Safety
 * Both texts are NUL-terminated strings; `report` is null or valid.
 */
enum TpStatus tp_verify(const char *system, const char *resolution, char **report);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next library call on this thread.
 */
const char *tp_last_error_message(void);

/**
 * # Safety
 * `s` is null or a string returned by this library, not yet freed.
 */
void tp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORICPROJ_H */
