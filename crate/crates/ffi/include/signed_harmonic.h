#ifndef SIGNED_HARMONIC_H
#define SIGNED_HARMONIC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum ShStatus {
  SH_STATUS_OK = 0,
  SH_STATUS_NULL_POINTER = 1,
  SH_STATUS_INVALID_INPUT = 2,
  SH_STATUS_CAP_EXCEEDED = 3,
  SH_STATUS_OUT_OF_MEMORY = 4,
  SH_STATUS_OVERFLOW = 5,
  SH_STATUS_UNREACHABLE = 6,
  SH_STATUS_TRUNCATION_FAILED = 7,
  SH_STATUS_PANIC = 8,
} ShStatus;

/**
 * Sequence families accepted by [`sh_sequence_new`].
 */
typedef enum ShKind {
  SH_KIND_PRIMES = 0,
  /**
   * Squarefree products of `k` distinct primes.
   */
  SH_KIND_K_ALMOST_SQUAREFREE = 1,
  /**
   * Integers with exactly `k` distinct prime factors.
   */
  SH_KIND_K_DISTINCT_FACTORS = 2,
  SH_KIND_NON_PRIMES = 3,
  /**
   * `a, a + q, a + 2q, …`
   */
  SH_KIND_ARITHMETIC_PROGRESSION = 4,
} ShKind;

/**
 * Opaque: a density evaluator with fixed truncation.
 */
typedef struct ShDensity ShDensity;

/**
 * Opaque: a minimal gap with its witness.
 */
typedef struct ShGapResult ShGapResult;

/**
 * Opaque: a minimal signed sum with its witness.
 */
typedef struct ShSearchResult ShSearchResult;

/**
 * Opaque: the first `N` terms of a sequence.
 */
typedef struct ShSequence ShSequence;

/**
 * Monte Carlo summary, filled in by [`sh_simulate`].
 */
typedef struct ShSimulationReport {
  double empirical_prob;
  double predicted;
  double standard_error;
  double z_score;
  double sample_mean;
  double sample_variance;
} ShSimulationReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *sh_last_error(void);

/**
 * Releases a string returned by the library.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void sh_string_free(char *s);

/**
 * First `n` terms of a sequence family. `k` applies to the factor-count
 * kinds, `a` and `q` to arithmetic progressions.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum ShStatus sh_sequence_new(enum ShKind kind,
                              uint32_t k,
                              uint64_t a,
                              uint64_t q,
                              size_t n,
                              struct ShSequence **out);

/**
 * A sequence from an explicit strictly increasing list of positive terms.
 *
 * # Safety
 * `terms` must point to `len` readable values; `out` must be valid for writes.
 */
enum ShStatus sh_sequence_from_terms(const uint64_t *terms, size_t len, struct ShSequence **out);

/**
 * Number of terms, or 0 for a null handle.
 *
 * # Safety
 * `seq` must be null or a live handle.
 */
size_t sh_sequence_len(const struct ShSequence *seq);

/**
 * Copies up to `cap` terms into `buf` and returns how many were copied.
 *
 * # Safety
 * `seq` must be a live handle and `buf` valid for `cap` writes.
 */
size_t sh_sequence_terms(const struct ShSequence *seq, uint64_t *buf, size_t cap);

/**
 * # Safety
 * `seq` must be null or a handle from this library, freed once.
 */
void sh_sequence_free(struct ShSequence *seq);

/**
 * Exact `min |Σ s_n/b_n − τ|`. `tau` is a decimal or `p/q` string; null means 0.
 *
 * # Safety
 * `seq` must be a live handle, `tau` null or NUL-terminated, `out` writable.
 */
enum ShStatus sh_min_signed_sum(const struct ShSequence *seq,
                                const char *tau,
                                struct ShSearchResult **out);

/**
 * `value · scale` as a decimal string; free with [`sh_string_free`].
 *
 * # Safety
 * `res` must be null or a live handle.
 */
char *sh_search_result_scaled_num(const struct ShSearchResult *res);

/**
 * The common denominator as a decimal string; free with [`sh_string_free`].
 *
 * # Safety
 * `res` must be null or a live handle.
 */
char *sh_search_result_scale(const struct ShSearchResult *res);

/**
 * Optimal signs as `+`/`-`, first term first; free with [`sh_string_free`].
 *
 * # Safety
 * `res` must be null or a live handle.
 */
char *sh_search_result_witness(const struct ShSearchResult *res);

/**
 * The minimum as a double (NaN for a null handle).
 *
 * # Safety
 * `res` must be null or a live handle.
 */
double sh_search_result_value(const struct ShSearchResult *res);

/**
 * # Safety
 * `res` must be null or a handle from this library, freed once.
 */
void sh_search_result_free(struct ShSearchResult *res);

/**
 * Exact smallest non-zero `|Σ ε_n/b_n|` over `ε_n ∈ {−1, 0, 1}`.
 *
 * # Safety
 * `seq` must be a live handle and `out` writable.
 */
enum ShStatus sh_min_gap(const struct ShSequence *seq, struct ShGapResult **out);

/**
 * `gap · scale` as a decimal string; free with [`sh_string_free`].
 *
 * # Safety
 * `res` must be null or a live handle.
 */
char *sh_gap_result_scaled_num(const struct ShGapResult *res);

/**
 * The common denominator as a decimal string; free with [`sh_string_free`].
 *
 * # Safety
 * `res` must be null or a live handle.
 */
char *sh_gap_result_scale(const struct ShGapResult *res);

/**
 * Copies up to `cap` witness entries (each −1, 0 or 1) and returns the count.
 *
 * # Safety
 * `res` must be a live handle and `buf` valid for `cap` writes.
 */
size_t sh_gap_result_witness(const struct ShGapResult *res, int8_t *buf, size_t cap);

/**
 * # Safety
 * `res` must be null or a handle from this library, freed once.
 */
void sh_gap_result_free(struct ShGapResult *res);

/**
 * `ρ_N(x) = Π cos(πx/b_n)` over the terms of `seq`.
 *
 * # Safety
 * `seq` must be a live handle and `value` writable.
 */
enum ShStatus sh_rho_n(const struct ShSequence *seq, double x, double *value);

/**
 * The infinite product `ρ(x)` for the family of `seq`, within `eps`.
 *
 * # Safety
 * `seq` must be a live handle; `value` and `bound` writable.
 */
enum ShStatus sh_rho_limit(const struct ShSequence *seq,
                           double x,
                           double eps,
                           double *value,
                           double *bound);

/**
 * A density evaluator for the family of `seq` at tolerance `eps`.
 *
 * # Safety
 * `seq` must be a live handle and `out` writable.
 */
enum ShStatus sh_density_new(const struct ShSequence *seq, double eps, struct ShDensity **out);

/**
 * `g(x)` and its quadrature error estimate.
 *
 * # Safety
 * `d` must be a live handle; `g` writable; `error` null or writable.
 */
enum ShStatus sh_density_eval(const struct ShDensity *d, double x, double *g, double *error);

/**
 * `∫_lo^hi g`.
 *
 * # Safety
 * `d` must be a live handle and `value` writable.
 */
enum ShStatus sh_density_interval(const struct ShDensity *d, double lo, double hi, double *value);

/**
 * # Safety
 * `d` must be null or a handle from this library, freed once.
 */
void sh_density_free(struct ShDensity *d);

/**
 * Samples `X_N` over the terms of `seq` and compares `P[X_N ∈ [lo, hi)]`
 * with `∫ g` from `d`.
 *
 * # Safety
 * `seq` and `d` must be live handles and `out` writable.
 */
enum ShStatus sh_simulate(const struct ShSequence *seq,
                          const struct ShDensity *d,
                          uint64_t samples,
                          uint64_t seed,
                          double lo,
                          double hi,
                          struct ShSimulationReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIGNED_HARMONIC_H */
