#ifndef JACOBI_SCATTERING_H
#define JACOBI_SCATTERING_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum JscStatus {
  JSC_STATUS_OK = 0,
  JSC_STATUS_NULL_POINTER = 1,
  JSC_STATUS_INVALID_INPUT = 2,
  JSC_STATUS_NUMERICAL_FAULT = 3,
  JSC_STATUS_PANIC = 4,
} JscStatus;

/**
 * Opaque handle to a validated coefficient sequence.
 */
typedef struct JscSequence JscSequence;

typedef struct JscBandEdges {
  double lambda_min;
  double lambda_max;
} JscBandEdges;

typedef struct JscScattering {
  double t_re;
  double t_im;
  double r_re;
  double r_im;
  double l_re;
  double l_im;
} JscScattering;

/**
 * Row-major 2x2 complex matrix: entry (i, j) is `re[2*i + j] + i im[2*i + j]`.
 */
typedef struct JscMatrix2 {
  double re[4];
  double im[4];
} JscMatrix2;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a sequence from dense arrays of length `len = n_max - n_min + 1`.
 *
 * # Safety
 * `a`, `b`, `w` must each point to `len` readable doubles; `out` must be a
 * valid pointer to write the handle to.
 */
enum JscStatus jsc_sequence_new(double a_inf,
                                double b_inf,
                                double w_inf,
                                int64_t n_min,
                                int64_t n_max,
                                const double *a,
                                const double *b,
                                const double *w,
                                size_t len,
                                struct JscSequence **out);

/**
 * Creates a sequence from the JSON coefficient-file format.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum JscStatus jsc_sequence_from_json(const char *json, struct JscSequence **out);

/**
 * Releases a handle. Passing null is a no-op.
 *
 * # Safety
 * `seq` must come from this library and not be used afterwards.
 */
void jsc_sequence_free(struct JscSequence *seq);

/**
 * Stored window of the sequence.
 *
 * # Safety
 * `seq` must be a live handle; `n_min` and `n_max` must be writable.
 */
enum JscStatus jsc_sequence_window(const struct JscSequence *seq, int64_t *n_min, int64_t *n_max);

/**
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum JscStatus jsc_band_edges(const struct JscSequence *seq, struct JscBandEdges *out);

/**
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum JscStatus jsc_lambda_from_theta(const struct JscSequence *seq, double theta, double *out);

/**
 * `T`, `R`, `L` at `z = exp(i theta)`.
 *
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum JscStatus jsc_scattering(const struct JscSequence *seq,
                              double theta,
                              struct JscScattering *out);

/**
 * Transition matrix at `z = exp(i theta)`.
 *
 * # Safety
 * `seq` must be a live handle; `out` must be writable.
 */
enum JscStatus jsc_transition_matrix(const struct JscSequence *seq,
                                     double theta,
                                     struct JscMatrix2 *out);

/**
 * Largest entrywise difference between the transition matrix and the
 * ordered product over the fragments cut at `breakpoints`.
 *
 * # Safety
 * `seq` must be a live handle; `breakpoints` must point to `count`
 * integers; `out` must be writable.
 */
enum JscStatus jsc_factorization_residual(const struct JscSequence *seq,
                                          const int64_t *breakpoints,
                                          size_t count,
                                          double theta,
                                          double *out);

/**
 * Number of fragments produced by `count` breakpoints, validating them.
 *
 * # Safety
 * `seq` must be a live handle; `breakpoints` must point to `count` integers.
 */
enum JscStatus jsc_fragment_count(const struct JscSequence *seq,
                                  const int64_t *breakpoints,
                                  size_t count,
                                  size_t *out);

/**
 * Static description of a status code.
 */
const char *jsc_status_message(enum JscStatus status);

/**
 * Error message of the previous call on this thread, or null if it
 * succeeded. The pointer is valid until the next call into this library
 * from the same thread.
 */
const char *jsc_last_error_message(void);

/**
 * Creates the unperturbed sequence with the given limits.
 *
 * # Safety
 * `out` must be a valid pointer to write the handle to.
 */
enum JscStatus jsc_sequence_unperturbed(double a_inf,
                                        double b_inf,
                                        double w_inf,
                                        struct JscSequence **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JACOBI_SCATTERING_H */
