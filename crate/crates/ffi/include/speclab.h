#ifndef SPECLAB_H
#define SPECLAB_H

/* Generated with cbindgen:0.27.0 */

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpeclabFamily {
  SPECLAB_FAMILY_CAL_J0 = 0,
  SPECLAB_FAMILY_CAL_J = 1,
  SPECLAB_FAMILY_JEPS = 2,
  SPECLAB_FAMILY_J0BAR = 3,
} SpeclabFamily;

typedef enum SpeclabKind {
  SPECLAB_KIND_SUBCRITICAL = 0,
  SPECLAB_KIND_CRITICAL = 1,
  SPECLAB_KIND_SUPERCRITICAL = 2,
  SPECLAB_KIND_NONPOSITIVE_OR_DIVERGENT = 3,
} SpeclabKind;

typedef enum SpeclabSide {
  SPECLAB_SIDE_PLUS = 0,
  SPECLAB_SIDE_MINUS = 1,
} SpeclabSide;

typedef enum SpeclabStatus {
  SPECLAB_STATUS_OK = 0,
  SPECLAB_STATUS_INVALID = 2,
  SPECLAB_STATUS_NON_CONVERGENCE = 3,
  SPECLAB_STATUS_NULL_POINTER = 4,
  SPECLAB_STATUS_BUFFER_TOO_SMALL = 5,
  SPECLAB_STATUS_PANIC = 6,
} SpeclabStatus;

/**
 * Opaque coupling `(alpha, beta, gamma)`.
 */
typedef struct SpeclabCoupling SpeclabCoupling;

/**
 * Opaque result of [`speclab_h_spectrum`].
 */
typedef struct SpeclabSpectrum SpeclabSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *speclab_version(void);

/**
 * Length in bytes of the last error message on this thread, without the NUL; 0 if none.
 */
size_t speclab_last_error_length(void);

/**
 * Copies the last error message (NUL-terminated) into `buf`.
 *
 * Returns the number of bytes written without the NUL, 0 when there is no
 * error, or -1 when `buf` is null or too small.
 *
 * # Safety
 * `buf` must point to `len` writable bytes.
 */
int speclab_last_error_message(char *buf, size_t len);

/**
 * Creates a coupling handle.
 *
 * # Safety
 * `out` must be a valid pointer; on success it receives a handle owned by the caller.
 */
enum SpeclabStatus speclab_coupling_new(double alpha,
                                        double beta,
                                        double gamma_re,
                                        double gamma_im,
                                        struct SpeclabCoupling **out);

/**
 * # Safety
 * `h` must be null or a handle from [`speclab_coupling_new`] not yet freed.
 */
void speclab_coupling_free(struct SpeclabCoupling *h);

/**
 * Jacobi couplings of every branch (`mu1, mu2`, or the single `mu` when
 * `beta = 0`); a divergent coupling is reported as `+INFINITY`.
 *
 * # Safety
 * `h` must be a live handle, `buf` must hold `cap` doubles and `out_len` be valid.
 */
enum SpeclabStatus speclab_branch_mus(const struct SpeclabCoupling *h,
                                      double *buf,
                                      size_t cap,
                                      size_t *out_len);

/**
 * Transition kind per branch, in the order of [`speclab_branch_mus`].
 *
 * # Safety
 * As for [`speclab_branch_mus`].
 */
enum SpeclabStatus speclab_classify(const struct SpeclabCoupling *h,
                                    double tol,
                                    enum SpeclabKind *buf,
                                    size_t cap,
                                    size_t *out_len);

/**
 * `alpha` at which a branch becomes critical for the given `beta`, `gamma`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SpeclabStatus speclab_critical_alpha(double beta,
                                          double gamma_re,
                                          double gamma_im,
                                          double *out);

/**
 * Eigenvalues of `H` below `1/2`, each confirmed by the secular defect.
 *
 * # Safety
 * `h` must be a live coupling handle and `out` a valid pointer; on success it
 * receives a spectrum handle owned by the caller.
 */
enum SpeclabStatus speclab_h_spectrum(const struct SpeclabCoupling *h,
                                      double tol,
                                      size_t n_cap,
                                      struct SpeclabSpectrum **out);

/**
 * # Safety
 * `s` must be null or a handle from [`speclab_h_spectrum`] not yet freed.
 */
void speclab_spectrum_free(struct SpeclabSpectrum *s);

/**
 * Number of eigenvalues held by `s`; 0 for a null handle.
 *
 * # Safety
 * `s` must be null or a live spectrum handle.
 */
size_t speclab_spectrum_len(const struct SpeclabSpectrum *s);

/**
 * Ascending eigenvalues of `s`.
 *
 * # Safety
 * `s` must be a live spectrum handle, `buf` must hold `cap` doubles and `out_len` be valid.
 */
enum SpeclabStatus speclab_spectrum_eigenvalues(const struct SpeclabSpectrum *s,
                                                double *buf,
                                                size_t cap,
                                                size_t *out_len);

/**
 * Largest gap between the Sturm and secular estimates of the eigenvalues.
 *
 * # Safety
 * `s` must be a live spectrum handle and `out` a valid pointer.
 */
enum SpeclabStatus speclab_spectrum_agreement(const struct SpeclabSpectrum *s, double *out);

/**
 * Number of eigenvalues of `H` below `1/2 - epsilon`.
 *
 * # Safety
 * `h` must be a live coupling handle and `out` a valid pointer.
 */
enum SpeclabStatus speclab_count_below_epsilon(const struct SpeclabCoupling *h,
                                               double epsilon,
                                               size_t n_cap,
                                               size_t *out);

/**
 * Eigenvalue count of a Jacobi family relative to `level`, stabilized under
 * doubling. `mu`, `lambda` and `epsilon` are read only by the families using them.
 *
 * # Safety
 * `out_count` and `out_n` must be valid pointers.
 */
enum SpeclabStatus speclab_jacobi_count(enum SpeclabFamily family,
                                        double mu,
                                        double lambda,
                                        double epsilon,
                                        double level,
                                        enum SpeclabSide side,
                                        size_t n_cap,
                                        size_t *out_count,
                                        size_t *out_n);

/**
 * Secular defect at complex `lambda`, normalized at depth `n`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SpeclabStatus speclab_secular_defect(double mu,
                                          double lambda_re,
                                          double lambda_im,
                                          size_t n,
                                          double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECLAB_H */
