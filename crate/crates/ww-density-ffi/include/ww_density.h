#ifndef WW_DENSITY_H
#define WW_DENSITY_H

/* This file is generated by cbindgen from ww-density-ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of a fallible binding call.
typedef enum WwStatus {
  WW_STATUS_OK = 0,
  // A required pointer argument was null.
  WW_STATUS_NULL_POINTER = 1,
  // An argument was outside its domain.
  WW_STATUS_INVALID_ARGUMENT = 2,
  // Array lengths or dimensions disagree.
  WW_STATUS_DIMENSION_MISMATCH = 3,
  // An internal numeric routine failed to converge.
  WW_STATUS_NUMERIC = 4,
  // The requested miss level cannot be certified by the tail model.
  WW_STATUS_UNREACHABLE_ALPHA = 5,
  // Malformed JSON or a value that fails validation on decode.
  WW_STATUS_JSON = 6,
} WwStatus;

// Streaming estimator handle.
typedef struct WwEstimator WwEstimator;

// Kernel handle.
typedef struct WwKernel WwKernel;

// Bandwidth schedule handle.
typedef struct WwPlan WwPlan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread, or null if the
// most recent fallible call succeeded. The pointer stays valid until the
// next fallible call on the same thread; do not free it.
const char *ww_last_error(void);

// Version of the underlying library as a static nul-terminated string.
const char *ww_version(void);

// Create a bandwidth schedule with smoothness `beta`, dimension `dim`, and
// scale constant `c1`.
//
// # Safety
//
// `out` must be a valid pointer; on success it receives a handle that must
// be released with [`ww_plan_free`].
enum WwStatus ww_plan_new(double beta, uint32_t dim, double c1, struct WwPlan **out);

// Release a plan handle. Null is ignored.
//
// # Safety
//
// `plan` must be null or a handle obtained from [`ww_plan_new`] that has not
// been freed yet.
void ww_plan_free(struct WwPlan *plan);

// Bandwidth used for observation number `k` (1-based).
//
// # Safety
//
// `plan` must be a live plan handle and `out` a valid pointer.
enum WwStatus ww_plan_bandwidth(const struct WwPlan *plan, uint64_t k, double *out);

// Deviation normalizer `B_n` after `n` observations.
//
// # Safety
//
// `plan` must be a live plan handle and `out` a valid pointer.
enum WwStatus ww_plan_normalizer(const struct WwPlan *plan, uint64_t n, double *out);

// Create the plain Gaussian kernel.
//
// # Safety
//
// `out` must be a valid pointer; the handle must be released with
// [`ww_kernel_free`].
enum WwStatus ww_kernel_gaussian(struct WwKernel **out);

// Create the plain Epanechnikov kernel.
//
// # Safety
//
// `out` must be a valid pointer; the handle must be released with
// [`ww_kernel_free`].
enum WwStatus ww_kernel_epanechnikov(struct WwKernel **out);

// Build the polynomial-modified kernel matching smoothness `beta` on top of
// `base`.
//
// # Safety
//
// `base` must be a live kernel handle and `out` a valid pointer.
enum WwStatus ww_kernel_build(const struct WwKernel *base, double beta, struct WwKernel **out);

// Decode a kernel from its JSON representation.
//
// # Safety
//
// `json` must be a valid nul-terminated string and `out` a valid pointer.
enum WwStatus ww_kernel_from_json(const char *json, struct WwKernel **out);

// Encode a kernel as JSON. The returned string must be released with
// [`ww_string_free`].
//
// # Safety
//
// `kernel` must be a live kernel handle and `out` a valid pointer.
enum WwStatus ww_kernel_to_json(const struct WwKernel *kernel, char **out);

// First non-vanishing moment index of the kernel.
//
// # Safety
//
// `kernel` must be a live kernel handle and `out` a valid pointer.
enum WwStatus ww_kernel_order(const struct WwKernel *kernel, uint32_t *out);

// Evaluate the one-dimensional kernel profile at `t`.
//
// # Safety
//
// `kernel` must be a live kernel handle and `out` a valid pointer.
enum WwStatus ww_kernel_eval1(const struct WwKernel *kernel, double t, double *out);

// Release a kernel handle. Null is ignored.
//
// # Safety
//
// `kernel` must be null or a live kernel handle.
void ww_kernel_free(struct WwKernel *kernel);

// Release a string returned by this library. Null is ignored.
//
// # Safety
//
// `s` must be null or a string obtained from [`ww_kernel_to_json`] that has
// not been freed yet.
void ww_string_free(char *s);

// Create a streaming estimator on the axis-aligned box `[lo, hi]` sampled
// with `shape[j]` nodes along axis `j`.
//
// # Safety
//
// `plan` and `kernel` must be live handles; `lo`, `hi`, and `shape` must
// point to `dim` readable elements; `out` must be a valid pointer. The
// handle must be released with [`ww_estimator_free`].
enum WwStatus ww_estimator_new(const struct WwPlan *plan,
                               const struct WwKernel *kernel,
                               const double *lo,
                               const double *hi,
                               size_t dim,
                               const size_t *shape,
                               struct WwEstimator **out);

// Fold one observation into the estimate.
//
// # Safety
//
// `estimator` must be a live estimator handle and `x` must point to `dim`
// readable elements.
enum WwStatus ww_estimator_update(struct WwEstimator *estimator, const double *x, size_t dim);

// Number of observations folded in so far.
//
// # Safety
//
// `estimator` must be a live estimator handle and `out` a valid pointer.
enum WwStatus ww_estimator_count(const struct WwEstimator *estimator, uint64_t *out);

// Number of grid nodes (the length expected by [`ww_estimator_values`]).
//
// # Safety
//
// `estimator` must be a live estimator handle and `out` a valid pointer.
enum WwStatus ww_estimator_node_count(const struct WwEstimator *estimator, size_t *out);

// Copy the current node values into `out`, which must hold exactly
// `ww_estimator_node_count` elements. Nodes are ordered with the last axis
// varying fastest.
//
// # Safety
//
// `estimator` must be a live estimator handle and `out` must point to `len`
// writable elements.
enum WwStatus ww_estimator_values(const struct WwEstimator *estimator, double *out, size_t len);

// Deviation normalizer `B_n` for the current observation count.
//
// # Safety
//
// `estimator` must be a live estimator handle and `out` a valid pointer.
enum WwStatus ww_estimator_normalizer(const struct WwEstimator *estimator, double *out);

// Release an estimator handle. Null is ignored.
//
// # Safety
//
// `estimator` must be null or a live estimator handle.
void ww_estimator_free(struct WwEstimator *estimator);

// Tail envelope profile `nu(z) = exp(-z - ln z * ln ln z)` for `z >= e`.
//
// # Safety
//
// `out` must be a valid pointer.
enum WwStatus ww_nu(double z, double *out);

// Moment growth gauge `psi(p) = p / ln p` for `p > 1`.
//
// # Safety
//
// `out` must be a valid pointer.
enum WwStatus ww_log_ratio(double p, double *out);

// Convex conjugate `sup_p [p t - p ln psi(p)]` of the log-ratio gauge over
// `p` in `[2, p_max]`, writing the supremum and its location.
//
// # Safety
//
// `out_value` and `out_maximizer` must be valid pointers.
enum WwStatus ww_young_fenchel(double t, double p_max, double *out_value, double *out_maximizer);

// Quantile of the calibrated envelope `u -> c * nu(u / s)`: the smallest
// in-domain level whose bound equals `alpha`.
//
// # Safety
//
// `out` must be a valid pointer.
enum WwStatus ww_tail_quantile(double c, double s, double alpha, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WW_DENSITY_H */
