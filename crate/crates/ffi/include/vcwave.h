#ifndef VCWAVE_H
#define VCWAVE_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum VcwStatus {
  VCW_STATUS_OK = 0,
  VCW_STATUS_NULL_POINTER = 1,
  VCW_STATUS_INVALID_ARGUMENT = 2,
  VCW_STATUS_NOT_IN_WAVE_REGION = 3,
  VCW_STATUS_NO_CONVERGENCE = 4,
  VCW_STATUS_PROFILE = 5,
  VCW_STATUS_SOLVER = 6,
  VCW_STATUS_DIAGNOSTICS = 7,
  VCW_STATUS_CONFIG = 8,
  VCW_STATUS_IO = 9,
  /**
   * The run completed but its verdict is a failure.
   */
  VCW_STATUS_VERDICT_FAILED = 10,
  VCW_STATUS_PANIC = 99,
} VcwStatus;

/**
 * Opaque composite ansatz.
 */
typedef struct VcwAnsatz VcwAnsatz;

/**
 * Opaque contact-wave profile.
 */
typedef struct VcwContactProfile VcwContactProfile;

/**
 * Gas constants; `a <= 0` selects `a = r`.
 */
typedef struct VcwGas {
  double r;
  double gamma;
  double a;
  double mu_tilde;
  double kappa_tilde;
  double alpha;
  double beta;
} VcwGas;

typedef struct VcwState {
  double v;
  double u;
  double theta;
} VcwState;

typedef struct VcwDecomposition {
  struct VcwState left;
  struct VcwState left_mid;
  struct VcwState right_mid;
  struct VcwState right;
  double p_mid;
  double delta_r1;
  double delta_cd;
  double delta_r3;
} VcwDecomposition;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Monatomic gas (`R = 1`, `gamma = 5/3`, unit prefactors, `alpha = 0`).
 */
struct VcwGas vcw_gas_monatomic(double beta);

/**
 * Library version as a static NUL-terminated string.
 */
const char *vcw_version(void);

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t vcw_last_error(char *buf, size_t len);

/**
 * R1-C-R3 decomposition of the Riemann problem `(left, right)`.
 *
 * # Safety
 * All pointers must be valid; `out` must be writable.
 */
enum VcwStatus vcw_riemann_solve(const struct VcwGas *gas,
                                 const struct VcwState *left,
                                 const struct VcwState *right,
                                 double tol,
                                 struct VcwDecomposition *out);

/**
 * Burgers wave between `w_l <= w_r` at `(x, t)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum VcwStatus vcw_burgers_eval(double w_l, double w_r, double x, double t, double *out);

/**
 * Solves the contact profile; `n_nodes = 0` or non-positive `l_xi`/`tol`
 * select the defaults.
 *
 * # Safety
 * `gas` must be valid; `out` must be writable. Release with
 * [`vcw_contact_profile_free`].
 */
enum VcwStatus vcw_contact_profile_new(const struct VcwGas *gas,
                                       double theta_minus,
                                       double theta_plus,
                                       double p_plus,
                                       double l_xi,
                                       size_t n_nodes,
                                       double tol,
                                       struct VcwContactProfile **out);

/**
 * # Safety
 * `p` must be null or a handle from [`vcw_contact_profile_new`], freed once.
 */
void vcw_contact_profile_free(struct VcwContactProfile *p);

/**
 * `(V, U, Theta)(x, t)` of the contact wave.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum VcwStatus vcw_contact_profile_eval(const struct VcwContactProfile *p,
                                        double x,
                                        double t,
                                        struct VcwState *out);

/**
 * Largest discrete residual and fitted Gaussian decay rate.
 *
 * # Safety
 * `p` must be a live handle; outputs must be writable.
 */
enum VcwStatus vcw_contact_profile_info(const struct VcwContactProfile *p,
                                        double *residual,
                                        double *decay_c1);

/**
 * Composite ansatz for the Riemann problem `(left, right)` with default
 * profile settings.
 *
 * # Safety
 * Inputs must be valid; `out` must be writable. Release with [`vcw_ansatz_free`].
 */
enum VcwStatus vcw_ansatz_new(const struct VcwGas *gas,
                              const struct VcwState *left,
                              const struct VcwState *right,
                              struct VcwAnsatz **out);

/**
 * # Safety
 * `a` must be null or a handle from [`vcw_ansatz_new`], freed once.
 */
void vcw_ansatz_free(struct VcwAnsatz *a);

/**
 * # Safety
 * `a` must be a live handle; `out` must be writable.
 */
enum VcwStatus vcw_ansatz_eval(const struct VcwAnsatz *a, double x, double t, struct VcwState *out);

/**
 * Source terms `(F, G)` left by the ansatz in the momentum and energy equations.
 *
 * # Safety
 * `a` must be a live handle; outputs must be writable.
 */
enum VcwStatus vcw_ansatz_sources(const struct VcwAnsatz *a,
                                  double x,
                                  double t,
                                  double *f,
                                  double *g);

/**
 * Loads a configuration file and runs it into `out_dir`. `passed` (may be
 * null) receives 1 on a passing verdict and 0 otherwise; a failing verdict
 * also returns [`VcwStatus::VerdictFailed`].
 *
 * # Safety
 * Paths must be NUL-terminated UTF-8; `passed` must be null or writable.
 */
enum VcwStatus vcw_run_scenario(const char *config_path, const char *out_dir, int *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VCWAVE_H */
