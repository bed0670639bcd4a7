#ifndef ADIA_H
#define ADIA_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit-code discipline.
 */
typedef enum {
  ADIA_STATUS_OK = 0,
  /**
   * Invalid argument (lattice/model/grid validation failure).
   */
  ADIA_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Numerical failure (non-convergence, degenerate gap, ...).
   */
  ADIA_STATUS_NUMERICAL_FAILURE = 3,
  /**
   * A required pointer was null.
   */
  ADIA_STATUS_NULL_POINTER = 4,
  /**
   * Internal panic caught at the boundary.
   */
  ADIA_STATUS_PANIC = 5,
} AdiaStatus;

/**
 * Opaque handle: one lattice + model-parameter combination with its
 * prepared solver state.
 */
typedef struct AdiaSystem AdiaSystem;

/**
 * One spectral sample of the interpolating Hamiltonian.
 */
typedef struct {
  double s;
  double e0;
  double e1;
  double gap;
  double v01;
  /**
   * v01 / gap^2
   */
  double integrand;
} AdiaSpectralPoint;

/**
 * Peak metrics of the integrand curve.
 */
typedef struct {
  double peak_height;
  double peak_location;
  double s_minus;
  double s_plus;
  double width;
  double t_estimate;
  double t_lae;
  double t_const;
} AdiaPeakSummary;

/**
 * Final statistics of one Schrodinger evolution.
 */
typedef struct {
  /**
   * Final marked-site probability.
   */
  double p0;
  double norm_drift;
  uint64_t steps;
  /**
   * |P0 change| in the final step-halving comparison.
   */
  double halving_delta;
} AdiaEvolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *adia_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *adia_version(void);

/**
 * Create a periodic system. On success writes a handle to `out`.
 *
 * # Safety
 * `out` must point to writable memory for one pointer.
 */
AdiaStatus adia_system_new_periodic(uint32_t dimension,
                                    uint32_t linear_size,
                                    double t,
                                    double mu,
                                    double epsilon,
                                    AdiaSystem **out);

/**
 * Create an open-boundary system with a marked site.
 *
 * # Safety
 * `out` must point to writable memory for one pointer.
 */
AdiaStatus adia_system_new_open(uint32_t dimension,
                                uint32_t linear_size,
                                uint64_t marked_site,
                                double t,
                                double mu,
                                double epsilon,
                                AdiaSystem **out);

/**
 * Release a handle created by one of the constructors.
 *
 * # Safety
 * `sys` must be a pointer returned by `adia_system_new_*`, not yet freed;
 * null is tolerated.
 */
void adia_system_free(AdiaSystem *sys);

/**
 * Number of lattice sites N = L^d.
 *
 * # Safety
 * `sys` must be a live handle.
 */
uint64_t adia_system_sites(const AdiaSystem *sys);

/**
 * Evaluate E0, E1, gap, V01 and the integrand at one s.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
AdiaStatus adia_spectral_point(const AdiaSystem *sys, double s, AdiaSpectralPoint *out);

/**
 * Run the integrand pipeline and report peak metrics. `base_points = 0`
 * selects the default grid.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
AdiaStatus adia_peak_summary(const AdiaSystem *sys, uint32_t base_points, AdiaPeakSummary *out);

/**
 * Constant-rate evolution for a total time `t_total`; writes final
 * statistics to `out`.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
AdiaStatus adia_evolve_constant_rate(const AdiaSystem *sys, double t_total, AdiaEvolution *out);

/**
 * Closed-form Grover-reference gap and matrix element.
 *
 * # Safety
 * `gap_out` and `v01_out` must be writable.
 */
AdiaStatus adia_grover_reference(uint64_t n, double s, double *gap_out, double *v01_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ADIA_H */
