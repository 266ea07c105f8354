/* chronofit C ABI. Generated by cbindgen from chronofit-ffi; do not edit. */

#ifndef CHRONOFIT_H
#define CHRONOFIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every entry point.
 */
typedef enum CfStatus {
  /**
   * Success.
   */
  CF_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  CF_STATUS_NULL_POINTER = 1,
  /**
   * Malformed argument: bad base, non-finite value, empty input.
   */
  CF_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Input outside the supported domain (for example sub-minute times).
   */
  CF_STATUS_DOMAIN = 3,
  /**
   * Numerical failure inside the computation.
   */
  CF_STATUS_NUMERIC = 4,
  /**
   * Operation not applicable to the value's current state.
   */
  CF_STATUS_SEMANTICS = 5,
  /**
   * Malformed data payload.
   */
  CF_STATUS_DATA = 6,
  /**
   * I/O failure.
   */
  CF_STATUS_IO = 7,
  /**
   * A string argument was not valid UTF-8.
   */
  CF_STATUS_UTF8 = 8,
  /**
   * Internal error (caught panic).
   */
  CF_STATUS_INTERNAL = 9,
} CfStatus;

/**
 * Density family of a curve.
 */
typedef enum CfFamily {
  CF_FAMILY_GAUSSIAN = 0,
  CF_FAMILY_EXPONENTIAL = 1,
  CF_FAMILY_LOG_NORMAL = 2,
  CF_FAMILY_GAMMA = 3,
  CF_FAMILY_SKEW_NORMAL = 4,
} CfFamily;

/**
 * Amplitude calibration of a curve.
 */
typedef enum CfNormalization {
  /**
   * Amplitude as fitted; no integral or peak guarantee.
   */
  CF_NORMALIZATION_RAW = 0,
  /**
   * Unit integral over the working domain; supports interval queries.
   */
  CF_NORMALIZATION_AUC_ONE = 1,
  /**
   * Unit maximum over the working domain.
   */
  CF_NORMALIZATION_PROPORTIONAL = 2,
} CfNormalization;

/**
 * Opaque curve handle. Allocate through the library, free with
 * [`cf_curve_free`].
 */
typedef struct CfCurve CfCurve;

/**
 * Flattened regression report. `r2` and `spearman` are meaningless (and set
 * to NaN) when their `_defined` flag is false, which happens on constant
 * inputs.
 */
typedef struct CfRegressionReport {
  size_t n;
  double mse;
  double mae;
  double r2;
  bool r2_defined;
  double spearman;
  bool spearman_defined;
  double nll;
  double crps;
} CfRegressionReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Short, static, NUL-terminated description of a status code.
 */
const char *cf_status_name(enum CfStatus status);

/**
 * Maps a time in minutes (>= 1) to the log axis of `base` (> 1).
 *
 * # Safety
 * `out` must be a valid pointer to writable memory for one `double`.
 */
enum CfStatus cf_to_log(double minutes, double base, double *out);

/**
 * Maps a log-axis value back to minutes.
 *
 * # Safety
 * `out` must be a valid pointer to writable memory for one `double`.
 */
enum CfStatus cf_from_log(double value, double base, double *out);

/**
 * Re-expresses a log-axis position in another base.
 *
 * # Safety
 * `out` must be a valid pointer to writable memory for one `double`.
 */
enum CfStatus cf_convert_log_value(double value, double from_base, double to_base, double *out);

/**
 * Converts skew-normal curve parameters between log bases: location and
 * scale are multiplied by ln(from)/ln(to), the shape is unchanged.
 *
 * # Safety
 * `out_xi`, `out_omega`, and `out_alpha` must each be a valid pointer to
 * writable memory for one `double`.
 */
enum CfStatus cf_convert_params(double xi,
                                double omega,
                                double alpha,
                                double from_base,
                                double to_base,
                                double *out_xi,
                                double *out_omega,
                                double *out_alpha);

/**
 * Log value, compression ratio t'/t, and compression percentage for one
 * timestamp.
 *
 * # Safety
 * `out_log`, `out_ratio`, and `out_percent` must each be a valid pointer to
 * writable memory for one `double`.
 */
enum CfStatus cf_compression_row(double minutes,
                                 double base,
                                 double *out_log,
                                 double *out_ratio,
                                 double *out_percent);

/**
 * Fits `family` to `len` annotation points (log-axis positions `t_log`,
 * validity `value` in (0, 1]) and returns a curve in the requested
 * normalization. `out_rmse` may be null; when given it receives the fit's
 * root-mean-square residual.
 *
 * # Safety
 * `t_log` and `value` must point to `len` readable `double`s each;
 * `out_curve` must be a valid pointer to writable memory for one
 * `CfCurve*`. The returned curve must be freed with [`cf_curve_free`].
 */
enum CfStatus cf_fit(const double *t_log,
                     const double *value,
                     size_t len,
                     enum CfFamily family,
                     double base,
                     enum CfNormalization normalization,
                     struct CfCurve **out_curve,
                     double *out_rmse);

/**
 * Parses a curve from its JSON wire format.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out_curve` must be a valid
 * pointer to writable memory for one `CfCurve*`. The returned curve must be
 * freed with [`cf_curve_free`].
 */
enum CfStatus cf_curve_from_json(const char *json, struct CfCurve **out_curve);

/**
 * Serializes a curve to its JSON wire format. The returned string must be
 * freed with [`cf_string_free`].
 *
 * # Safety
 * `curve` must be a live handle from this library; `out_json` must be a
 * valid pointer to writable memory for one `char*`.
 */
enum CfStatus cf_curve_to_json(const struct CfCurve *curve, char **out_json);

/**
 * Rescales a curve so it integrates to one over the default working domain.
 *
 * # Safety
 * `curve` must be a live handle from this library; `out_curve` must be a
 * valid pointer to writable memory for one `CfCurve*`. The returned curve
 * must be freed with [`cf_curve_free`].
 */
enum CfStatus cf_curve_auc_normalize(const struct CfCurve *curve, struct CfCurve **out_curve);

/**
 * Rescales a curve so its maximum over the default working domain is one.
 *
 * # Safety
 * Same contract as [`cf_curve_auc_normalize`].
 */
enum CfStatus cf_curve_proportional(const struct CfCurve *curve, struct CfCurve **out_curve);

/**
 * Re-expresses a curve on the log axis of another base. Location-like and
 * scale-like parameters are rescaled; the shape and the normalization state
 * are preserved.
 *
 * # Safety
 * Same contract as [`cf_curve_auc_normalize`].
 */
enum CfStatus cf_curve_convert_base(const struct CfCurve *curve,
                                    double to_base,
                                    struct CfCurve **out_curve);

/**
 * Reads a curve's family, parameters, amplitude, base, and normalization.
 * Any out pointer may be null to skip that field. `out_params` receives up
 * to three values in family order: Gaussian (mu, sigma), exponential
 * (lambda), log-normal (mu, sigma), gamma (k, theta), skew-normal (xi,
 * omega, alpha); unused slots are zeroed.
 *
 * # Safety
 * `curve` must be a live handle from this library; `out_params`, when
 * non-null, must point to writable memory for three `double`s; the other
 * out pointers, when non-null, must each be valid for one value of their
 * type.
 */
enum CfStatus cf_curve_info(const struct CfCurve *curve,
                            enum CfFamily *out_family,
                            double *out_params,
                            double *out_scale,
                            double *out_base,
                            enum CfNormalization *out_normalization);

/**
 * Curve value at a time in minutes.
 *
 * # Safety
 * `curve` must be a live handle from this library; `out` must be a valid
 * pointer to writable memory for one `double`.
 */
enum CfStatus cf_validity_at(const struct CfCurve *curve, double minutes, double *out);

/**
 * Probability mass over `[start_minutes, end_minutes]`. The curve must be
 * AUC-normalized; raw and proportional amplitudes are rejected with
 * `CF_STATUS_SEMANTICS`.
 *
 * # Safety
 * Same contract as [`cf_validity_at`].
 */
enum CfStatus cf_interval_probability(const struct CfCurve *curve,
                                      double start_minutes,
                                      double end_minutes,
                                      double *out);

/**
 * Time in minutes where the curve attains its maximum over the default
 * working domain.
 *
 * # Safety
 * Same contract as [`cf_validity_at`].
 */
enum CfStatus cf_peak_minutes(const struct CfCurve *curve, double *out);

/**
 * Evaluates predictions against gold values: MSE, MAE, R2, Spearman, NLL,
 * and CRPS in one pass.
 *
 * # Safety
 * `pred` and `gold` must point to `len` readable `double`s each; `out` must
 * be a valid pointer to writable memory for one `CfRegressionReport`.
 */
enum CfStatus cf_regression_report(const double *pred,
                                   const double *gold,
                                   size_t len,
                                   struct CfRegressionReport *out);

/**
 * Releases a curve handle. Null is a no-op.
 *
 * # Safety
 * `curve` must be null or a handle obtained from this library that has not
 * already been freed.
 */
void cf_curve_free(struct CfCurve *curve);

/**
 * Releases a string allocated by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be null or a string obtained from this library that has not
 * already been freed.
 */
void cf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHRONOFIT_H */
