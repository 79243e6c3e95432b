#ifndef KICKED_SPECTRA_H
#define KICKED_SPECTRA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum KsStatus {
  KS_STATUS_OK = 0,
  KS_STATUS_NULL_POINTER = 1,
  KS_STATUS_DOMAIN = 2,
  KS_STATUS_DIMENSION_MISMATCH = 3,
  KS_STATUS_CONFIG = 4,
  KS_STATUS_NUMERICAL = 5,
  KS_STATUS_INVARIANT = 6,
  KS_STATUS_IO = 7,
  KS_STATUS_PANIC = 8,
} KsStatus;

/**
 * Effective-Hamiltonian construction used by [`ks_kicked_harper_effective`].
 */
typedef enum KsHarperMode {
  KS_HARPER_MODE_CLOSED_FORM = 0,
  KS_HARPER_MODE_GENERAL = 1,
} KsHarperMode;

/**
 * Opaque Hermitian operator.
 */
typedef struct KsOperator KsOperator;

/**
 * Opaque ascending list of reals (energies or quasienergies).
 */
typedef struct KsSpectrum KsSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the next
 * failing call on the same thread.
 */
const char *ks_last_error_message(void);

/**
 * `(sqrt(5) - 1) / 2`.
 */
double ks_golden_ratio(void);

/**
 * Effective Hamiltonian of the double kicked top; spin given as `2j`.
 */
enum KsStatus ks_dkt_effective(uint32_t twice_j,
                               double alpha,
                               double eta,
                               double period,
                               struct KsOperator **out);

/**
 * One of the six SU(2) family cases, `case_label` in `'a'..='f'`.
 * `epsilon` is read only when `has_epsilon` is true and is required for case `'e'`.
 */
enum KsStatus ks_su2_family(uint32_t twice_j,
                            char case_label,
                            double alpha,
                            double eta,
                            double epsilon,
                            bool has_epsilon,
                            struct KsOperator **out);

/**
 * Static open Harper chain of `length` sites.
 */
enum KsStatus ks_harper(size_t length, double sigma, struct KsOperator **out);

/**
 * Kicked-Harper effective Hamiltonian on an open chain.
 */
enum KsStatus ks_kicked_harper_effective(size_t length,
                                         double sigma,
                                         double alpha,
                                         double period,
                                         enum KsHarperMode mode,
                                         struct KsOperator **out);

/**
 * Matrix dimension, or 0 for a null handle.
 */
size_t ks_operator_dim(const struct KsOperator *op);

/**
 * Reads entry `(row, col)`.
 */
enum KsStatus ks_operator_get(const struct KsOperator *op,
                              size_t row,
                              size_t col,
                              double *re,
                              double *im);

void ks_operator_free(struct KsOperator *op);

/**
 * Ascending eigenvalues of an operator.
 */
enum KsStatus ks_operator_eigenvalues(const struct KsOperator *op, struct KsSpectrum **out);

/**
 * Ascending quasienergies in `(-pi, pi]` of the exact double-kicked-top Floquet operator.
 */
enum KsStatus ks_dkt_quasienergies(uint32_t twice_j,
                                   double alpha,
                                   double eta,
                                   struct KsSpectrum **out);

size_t ks_spectrum_len(const struct KsSpectrum *s);

/**
 * Borrowed pointer to `ks_spectrum_len` values; valid until the handle is freed.
 */
const double *ks_spectrum_values(const struct KsSpectrum *s);

void ks_spectrum_free(struct KsSpectrum *s);

/**
 * Box-counting `tau_q` of `values` with the default bin grid. Writes `nq`
 * entries to `tau_out` and `dq_out` (`NaN` at `q = 1`) and the slope over
 * `q in [2, 8]` to `mu_out` (`NaN` if undefined). Any output may be null.
 */
enum KsStatus ks_tau_spectrum(const double *values,
                              size_t n,
                              const double *q,
                              size_t nq,
                              double *tau_out,
                              double *dq_out,
                              double *mu_out);

/**
 * `1 / sum w^2` for weights summing to one.
 */
enum KsStatus ks_participation_ratio(const double *weights, size_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KICKED_SPECTRA_H */
