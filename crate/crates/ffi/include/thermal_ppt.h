#ifndef THERMAL_PPT_H
#define THERMAL_PPT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define TP_TRANSFORM_CH 0

#define TP_TRANSFORM_CF 1

#define TP_RULE_DEFAULT 0

#define TP_RULE_ALL_BUT_FIRST 1

#define TP_RULE_HALF 2

#define TP_RULE_EXPLICIT 3

typedef enum {
  TP_STATUS_OK = 0,
  TP_STATUS_NULL_POINTER = 1,
  /**
   * The inputs violate a precondition (bad N, k, alpha, matrix, ...).
   */
  TP_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The output buffer is shorter than required.
   */
  TP_STATUS_BUFFER_TOO_SMALL = 3,
  /**
   * I/O or other environment failure.
   */
  TP_STATUS_INTERNAL = 4,
  TP_STATUS_PANIC = 5,
} TpStatus;

typedef enum {
  TP_DC_VERDICT_NPT = 0,
  TP_DC_VERDICT_INCONCLUSIVE = 1,
} TpDcVerdict;

/**
 * Opaque dense density matrix.
 */
typedef struct TpDensityMatrix TpDensityMatrix;

/**
 * Opaque polarization vector.
 */
typedef struct TpPolarization TpPolarization;

typedef struct {
  bool npt;
  double margin;
  bool at_boundary;
} TpVerdict;

/**
 * `extremal_max`/`extremal_min` are `b_max`/`b_min` for CH and `d_max`/`d_min` for CF.
 */
typedef struct {
  bool full_sep_possible;
  bool full_dist_possible;
  double extremal_max;
  double extremal_min;
} TpClassification;

typedef struct {
  size_t n;
  uint32_t k;
  size_t w;
  double alpha_b;
  double log10_inv_alpha;
  double residual;
} TpBoundaryPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message (NUL-terminated, truncated to fit) into `buf`.
 * Returns the buffer size needed for the full message including the NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t tp_last_error(char *buf, size_t len);

/**
 * # Safety
 * `alphas` must point to `n` readable doubles; `out` must be writable.
 */
TpStatus tp_polarization_new(const double *alphas, size_t n, TpPolarization **out);

/**
 * # Safety
 * `pol` must be null or a handle from [`tp_polarization_new`] not yet freed.
 */
void tp_polarization_free(TpPolarization *pol);

/**
 * NPT verdict of the transformed state across bipartition `k`.
 *
 * # Safety
 * `pol` must be a live handle; `out` must be writable.
 */
TpStatus tp_npt(uint32_t transform, const TpPolarization *pol, uint64_t k, TpVerdict *out);

/**
 * Partial-transpose eigenvalues as `2^N` doubles laid out `[mu_0^+, mu_0^-, mu_1^+, ...]`.
 *
 * # Safety
 * `pol` must be a live handle; `out` must point to `len` writable doubles.
 */
TpStatus tp_pt_spectrum(uint32_t transform,
                        const TpPolarization *pol,
                        uint64_t k,
                        double *out,
                        size_t len);

/**
 * GHZ-basis weights as `2^N` doubles laid out `[omega_0^+, omega_0^-, ...]`.
 *
 * # Safety
 * `pol` must be a live handle; `out` must point to `len` writable doubles.
 */
TpStatus tp_bell_weights(uint32_t transform, const TpPolarization *pol, double *out, size_t len);

/**
 * # Safety
 * `pol` must be a live handle; `out` must be writable.
 */
TpStatus tp_classify(uint32_t transform, const TpPolarization *pol, TpClassification *out);

/**
 * Boundary scale for `n` qubits. `rule` is one of the `TP_RULE_*` codes;
 * `k` is used only with `TP_RULE_EXPLICIT`.
 *
 * # Safety
 * `out` must be writable.
 */
TpStatus tp_boundary_alpha(uint32_t transform,
                           size_t n,
                           uint32_t rule,
                           uint64_t k,
                           double delta,
                           uint32_t seed,
                           double tol,
                           TpBoundaryPoint *out);

/**
 * Density matrix from `len = 4^N` row-major doubles; must be symmetric,
 * unit-trace and positive semidefinite.
 *
 * # Safety
 * `data` must point to `len` readable doubles; `out` must be writable.
 */
TpStatus tp_density_from_buffer(const double *data, size_t len, TpDensityMatrix **out);

/**
 * # Safety
 * `pol` must be a live handle; `out` must be writable.
 */
TpStatus tp_density_thermal(const TpPolarization *pol, TpDensityMatrix **out);

/**
 * New matrix `U rho U^T` for the given transform.
 *
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
TpStatus tp_density_transform(uint32_t transform,
                              const TpDensityMatrix *rho,
                              TpDensityMatrix **out);

/**
 * # Safety
 * `out` must be writable.
 */
TpStatus tp_density_isotropic(double f, TpDensityMatrix **out);

/**
 * Qubit count of the matrix, or 0 for a null handle.
 *
 * # Safety
 * `rho` must be null or a live handle.
 */
size_t tp_density_qubits(const TpDensityMatrix *rho);

/**
 * Copy the `4^N` row-major entries into `out`.
 *
 * # Safety
 * `rho` must be a live handle; `out` must point to `len` writable doubles.
 */
TpStatus tp_density_copy(const TpDensityMatrix *rho, double *out, size_t len);

/**
 * Smallest eigenvalue of the partial transpose across `k`, by dense diagonalization.
 *
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
TpStatus tp_density_min_pt_eigenvalue(const TpDensityMatrix *rho, uint64_t k, double *out);

/**
 * Dür–Cirac verdict across `k` after X flips on the `n_flips` listed qubits (1-based).
 *
 * # Safety
 * `rho` must be a live handle; `flips` must point to `n_flips` readable
 * values (or be null when `n_flips` is 0); `out` must be writable.
 */
TpStatus tp_dc_verdict(const TpDensityMatrix *rho,
                       uint64_t k,
                       const size_t *flips,
                       size_t n_flips,
                       TpDcVerdict *out);

/**
 * # Safety
 * `rho` must be null or a handle from a `tp_density_*` constructor not yet freed.
 */
void tp_density_free(TpDensityMatrix *rho);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THERMAL_PPT_H */
