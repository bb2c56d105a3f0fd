#ifndef GENHILBERT_H
#define GENHILBERT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GhFamily {
  GH_FAMILY_STANDARD = 0,
  GH_FAMILY_POWER = 1,
  GH_FAMILY_WEIGHTED_STANDARD = 2,
  GH_FAMILY_ODD_LINEAR = 3,
  GH_FAMILY_SQUARED_ODD = 4,
} GhFamily;

typedef enum GhProvenance {
  GH_PROVENANCE_EXACT = 0,
  GH_PROVENANCE_TRUNCATED_WITH_TAIL = 1,
  GH_PROVENANCE_SCAN_ONLY = 2,
} GhProvenance;

/**
 * Result of every fallible call.
 */
typedef enum GhStatus {
  GH_STATUS_OK = 0,
  GH_STATUS_NULL_POINTER = 1,
  GH_STATUS_INVALID_ARGUMENT = 2,
  GH_STATUS_OUT_OF_RANGE = 3,
  GH_STATUS_SCAN_EXHAUSTED = 4,
  GH_STATUS_NO_CONVERGENCE = 5,
  GH_STATUS_NUMERICAL = 6,
  GH_STATUS_PARSE = 7,
  GH_STATUS_PANIC = 99,
} GhStatus;

typedef enum GhVerdict {
  GH_VERDICT_YES = 0,
  GH_VERDICT_NO = 1,
  GH_VERDICT_UNKNOWN = 2,
} GhVerdict;

/**
 * Opaque sequence handle.
 */
typedef struct GhSequence GhSequence;

typedef struct GhVerdicts {
  enum GhVerdict well_defined;
  enum GhVerdict bounded;
  enum GhVerdict compact;
  enum GhVerdict injective;
  enum GhVerdict range_closed;
} GhVerdicts;

/**
 * `[lower, upper]`; `upper` may be `+inf`.
 */
typedef struct GhInterval {
  double lower;
  double upper;
  enum GhProvenance provenance;
} GhInterval;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version string of the library, statically allocated.
 */
const char *gh_version(void);

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call into the library on this thread.
 */
const char *gh_last_error_message(void);

/**
 * Built-in family. `alpha` and `shift` are read only for `GH_FAMILY_POWER`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum GhStatus gh_sequence_new_family(enum GhFamily family,
                                     double alpha,
                                     double shift,
                                     struct GhSequence **out);

/**
 * Finite sequence of `len` pairs `(nodes[i], weights[i])`.
 *
 * # Safety
 * `nodes` and `weights` must point to `len` readable doubles; `out` must be
 * writable.
 */
enum GhStatus gh_sequence_new_pairs(const double *nodes,
                                    const double *weights,
                                    size_t len,
                                    struct GhSequence **out);

/**
 * Parses `x d` lines or a JSON family selector.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum GhStatus gh_sequence_parse(const char *text, struct GhSequence **out);

/**
 * The reciprocal view `(1/x, d/x)`, which generates the same matrix.
 *
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum GhStatus gh_sequence_reciprocal(const struct GhSequence *seq, struct GhSequence **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `seq` must come from this library and not be used afterwards.
 */
void gh_sequence_free(struct GhSequence *seq);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void gh_string_free(char *s);

/**
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum GhStatus gh_classify(const struct GhSequence *seq, size_t scan, struct GhVerdicts *out);

/**
 * Full classification report with certificates, as JSON.
 *
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum GhStatus gh_classify_json(const struct GhSequence *seq, size_t scan, char **out);

/**
 * `d_i d_j / (x_i + x_j)` for 1-based `i`, `j`.
 *
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum GhStatus gh_entry(const struct GhSequence *seq, size_t i, size_t j, double *out);

/**
 * `out = H^k f`, with `f` and `out` of length `k`.
 *
 * # Safety
 * `f` must hold `k` readable doubles and `out` `k` writable ones.
 */
enum GhStatus gh_apply_h(const struct GhSequence *seq, const double *f, size_t k, double *out);

/**
 * Cesàro-Hardy operator on the first `k` indices.
 *
 * # Safety
 * As [`gh_apply_h`].
 */
enum GhStatus gh_apply_cesaro(const struct GhSequence *seq, const double *f, size_t k, double *out);

/**
 * Adjoint of the Cesàro-Hardy operator on the first `k` indices.
 *
 * # Safety
 * As [`gh_apply_h`].
 */
enum GhStatus gh_apply_cesaro_adjoint(const struct GhSequence *seq,
                                      const double *f,
                                      size_t k,
                                      double *out);

/**
 * `N(x_k) M(x_k)` as an interval.
 *
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum GhStatus gh_product(const struct GhSequence *seq,
                         size_t k,
                         size_t scan,
                         struct GhInterval *out);

/**
 * `B̃(l)`, also the upper bound on the `l`-th singular value.
 *
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum GhStatus gh_btilde(const struct GhSequence *seq,
                        size_t l,
                        size_t scan,
                        struct GhInterval *out);

/**
 * Natural log of the leading `k x k` determinant; `-inf` if a weight is zero.
 *
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum GhStatus gh_log_gamma(const struct GhSequence *seq, size_t k, double *out);

/**
 * Natural log of the lower bound on the `k`-th singular value.
 *
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum GhStatus gh_lower_bound(const struct GhSequence *seq, size_t k, double *out);

/**
 * All `k` eigenvalues of the leading `k x k` block, descending.
 *
 * # Safety
 * `out` must hold `k` writable doubles.
 */
enum GhStatus gh_eigenvalues(const struct GhSequence *seq, size_t k, double *out);

/**
 * Singular-value sandwich for `k` as JSON. A null `schedule` (or zero
 * length) selects the default schedule.
 *
 * # Safety
 * `schedule` must hold `schedule_len` readable sizes; `out` must be writable.
 */
enum GhStatus gh_sandwich_json(const struct GhSequence *seq,
                               size_t k,
                               const size_t *schedule,
                               size_t schedule_len,
                               size_t scan,
                               char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GENHILBERT_H */
