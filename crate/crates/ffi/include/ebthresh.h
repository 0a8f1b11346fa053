#ifndef EBTHRESH_H
#define EBTHRESH_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EbtPrior {
  EBT_PRIOR_LAPLACE = 0,
  EBT_PRIOR_QUASI_CAUCHY = 1,
} EbtPrior;

typedef enum EbtRule {
  EBT_RULE_POSTERIOR_MEDIAN = 0,
  EBT_RULE_POSTERIOR_MEAN = 1,
  EBT_RULE_HARD = 2,
  EBT_RULE_SOFT = 3,
} EbtRule;

// Outcome of every call.
typedef enum EbtStatus {
  EBT_STATUS_OK = 0,
  EBT_STATUS_NULL_POINTER = 1,
  EBT_STATUS_INVALID_PARAMETER = 2,
  EBT_STATUS_DATA_ERROR = 3,
  EBT_STATUS_NUMERICAL_ERROR = 4,
  EBT_STATUS_PANIC = 5,
} EbtStatus;

// Opaque estimator handle.
typedef struct EbtEstimator EbtEstimator;

// Estimator settings. Start from [`ebt_config_default`] and override fields.
typedef struct EbtConfig {
  enum EbtPrior prior;
  // Laplace scale; ignored for the quasi-Cauchy prior.
  double scale;
  // Fit the Laplace scale jointly with the weight.
  bool estimate_scale;
  enum EbtRule rule;
  // Exponent `A` of the very-sparse modification; negative disables it.
  double modified_exponent;
  // When positive, the modification fires once `t̂ ≥ f·√(2 log n)`;
  // otherwise the default cutover is used.
  double cutover_fraction;
  // Noise standard deviation used to standardise the data.
  double noise_sd;
} EbtConfig;

// Fitted quantities reported by [`ebt_estimate`].
typedef struct EbtFit {
  double w_hat;
  // Laplace scale in force (fitted or fixed); NaN for the quasi-Cauchy prior.
  double a_hat;
  double t_hat;
  double zeta_hat;
  // Threshold actually applied, on the standardised scale.
  double threshold_applied;
  bool at_lower_boundary;
  bool at_upper_boundary;
  bool modification_applied;
} EbtFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Laplace prior with scale ½, fixed scale, posterior median, no
// modification, unit noise.
struct EbtConfig ebt_config_default(void);

// Message for the last failed call on this thread, or NULL. The pointer is
// valid until the next call into this library on the same thread.
const char *ebt_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *ebt_version(void);

// Validates `config` and creates an estimator in `*out`.
//
// # Safety
// `config` must point to a valid `EbtConfig` and `out` to writable storage
// for a pointer.
enum EbtStatus ebt_estimator_new(const struct EbtConfig *config, struct EbtEstimator **out);

// Releases an estimator. NULL is ignored.
//
// # Safety
// `estimator` must be NULL or a handle from [`ebt_estimator_new`] that has
// not been freed.
void ebt_estimator_free(struct EbtEstimator *estimator);

// Denoises `n` values from `data` into `out_values` (length `n`, may alias
// `data`) and optionally reports the fit in `out_fit`.
//
// # Safety
// `data` and `out_values` must point to `n` readable / writable doubles;
// `out_fit` must be NULL or writable.
enum EbtStatus ebt_estimate(const struct EbtEstimator *estimator,
                            const double *data,
                            uintptr_t n,
                            double *out_values,
                            struct EbtFit *out_fit);

// `√(2 log n)`; fails for `n < 2`.
//
// # Safety
// `out` must be writable.
enum EbtStatus ebt_universal_threshold(uintptr_t n, double *out);

// Threshold `t(w)` of the posterior median for weight `w ∈ (0, 1]`.
//
// # Safety
// `out` must be writable.
enum EbtStatus ebt_threshold_of_weight(enum EbtPrior prior, double scale, double w, double *out);

// Posterior median of `μ` given one observation `x`.
//
// # Safety
// `out` must be writable.
enum EbtStatus ebt_posterior_median(enum EbtPrior prior,
                                    double scale,
                                    double w,
                                    double x,
                                    double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EBTHRESH_H */
