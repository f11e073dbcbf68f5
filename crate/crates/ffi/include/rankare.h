#ifndef RANKARE_H
#define RANKARE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

/**
 * Which Wilcoxon / van der Waerden quantity [`rankare_hl_limit`] returns.
 */
typedef enum RankareQuantity {
  RANKARE_QUANTITY_C = 0,
  RANKARE_QUANTITY_D = 1,
  RANKARE_QUANTITY_ARE = 2,
  RANKARE_QUANTITY_ARE_SERIAL = 3,
} RankareQuantity;

/**
 * Status codes. `RANKARE_STATUS_OK` is zero; everything else is a failure.
 */
typedef enum RankareStatus {
  RANKARE_STATUS_OK = 0,
  RANKARE_STATUS_NULL_POINTER = 1,
  RANKARE_STATUS_PARSE = 2,
  RANKARE_STATUS_DOMAIN = 3,
  RANKARE_STATUS_DIVERGENCE = 4,
  RANKARE_STATUS_NON_CONVERGENCE = 5,
  RANKARE_STATUS_PRECONDITION = 6,
  RANKARE_STATUS_OUTSIDE_F2 = 7,
  RANKARE_STATUS_UNSUPPORTED = 8,
  RANKARE_STATUS_SHAPE = 9,
  RANKARE_STATUS_EXTRAPOLATION_UNSTABLE = 10,
  RANKARE_STATUS_NO_BRACKET = 11,
  RANKARE_STATUS_TIES = 12,
  RANKARE_STATUS_BUDGET_EXCEEDED = 13,
  RANKARE_STATUS_IO = 14,
  RANKARE_STATUS_PANIC = 15,
} RankareStatus;

/**
 * Opaque density handle.
 */
typedef struct RankareDensity RankareDensity;

/**
 * Opaque score-generating function handle.
 */
typedef struct RankareScore RankareScore;

/**
 * Efficiency report. Serial-only fields are NaN for a nonserial report.
 */
typedef struct RankareAreReport {
  double c_f;
  double d_f;
  double k_ratio_nonserial;
  double k_ratio_serial;
  double are;
  double abs_err;
  bool serial;
  bool outside_f2;
} RankareAreReport;

/**
 * Rank autocorrelation at one lag with its permutation moments.
 */
typedef struct RankareAutocorr {
  size_t lag;
  double raw;
  double mean;
  double sd;
  double standardized;
  /**
   * True when the moments come from full enumeration, false for Monte Carlo.
   */
  bool exact;
} RankareAutocorr;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *rankare_version(void);

/**
 * Message of the last failure on this thread, or NULL if the last call
 * succeeded. Valid until the next call into the library on this thread.
 */
const char *rankare_last_error_message(void);

/**
 * Parses a density such as `gaussian`, `student:4` or `hl:0.01:0.5`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum RankareStatus rankare_density_parse(const char *spec, struct RankareDensity **out);

/**
 * Releases a density handle. NULL is ignored.
 *
 * # Safety
 * `d` must come from [`rankare_density_parse`] and not be freed twice.
 */
void rankare_density_free(struct RankareDensity *d);

/**
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum RankareStatus rankare_density_pdf(const struct RankareDensity *d, double x, double *out);

/**
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum RankareStatus rankare_density_cdf(const struct RankareDensity *d, double x, double *out);

/**
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum RankareStatus rankare_density_quantile(const struct RankareDensity *d, double u, double *out);

/**
 * Parses a score such as `wilcoxon`, `vdw`, `student:2` or `optimal:powerexp:3`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum RankareStatus rankare_score_parse(const char *spec, struct RankareScore **out);

/**
 * Releases a score handle. NULL is ignored.
 *
 * # Safety
 * `j` must come from [`rankare_score_parse`] and not be freed twice.
 */
void rankare_score_free(struct RankareScore *j);

/**
 * Evaluates the score at `u` in (0, 1).
 *
 * # Safety
 * `j` must be a live handle; `out` must be writable.
 */
enum RankareStatus rankare_score_eval(const struct RankareScore *j, double u, double *out);

/**
 * Nonserial efficiency of `j1` relative to `j2` under `f`.
 *
 * # Safety
 * All handles must be live; `out` must be writable.
 */
enum RankareStatus rankare_are_nonserial(const struct RankareScore *j1,
                                         const struct RankareScore *j2,
                                         const struct RankareDensity *f,
                                         double tol,
                                         struct RankareAreReport *out);

/**
 * Serial efficiency of the statistic with scores `(j1, j2)` relative to the
 * one with `(j3, j4)` under `f`. Infinite-variance densities set
 * `outside_f2` rather than failing.
 *
 * # Safety
 * All handles must be live; `out` must be writable.
 */
enum RankareStatus rankare_are_serial(const struct RankareScore *j1,
                                      const struct RankareScore *j2,
                                      const struct RankareScore *j3,
                                      const struct RankareScore *j4,
                                      const struct RankareDensity *f,
                                      double tol,
                                      struct RankareAreReport *out);

/**
 * Hodges–Lehmann limit `a -> 0` of a Wilcoxon / van der Waerden quantity.
 *
 * # Safety
 * `out` must be writable.
 */
enum RankareStatus rankare_hl_limit(double eps, enum RankareQuantity quantity, double *out);

/**
 * Rank autocorrelation of `data[0..n]` at `lag` for a statistic named like
 * the CLI `--stat` option (`vdw`, `sww`, `kendall` or `J1*J2`). Ties are
 * rejected.
 *
 * # Safety
 * `data` must point to `n` doubles; `statistic` must be a NUL-terminated
 * string; `out` must be writable.
 */
enum RankareStatus rankare_autocorr(const double *data,
                                    size_t n,
                                    size_t lag,
                                    const char *statistic,
                                    struct RankareAutocorr *out);

/**
 * Rank autocorrelation with score handles `j1` (current) and `j2` (lagged).
 *
 * # Safety
 * `data` must point to `n` doubles; handles must be live; `out` must be writable.
 */
enum RankareStatus rankare_rank_autocorr(const double *data,
                                         size_t n,
                                         size_t lag,
                                         const struct RankareScore *j1,
                                         const struct RankareScore *j2,
                                         struct RankareAutocorr *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RANKARE_H */
