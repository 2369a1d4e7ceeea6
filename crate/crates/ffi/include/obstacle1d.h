#ifndef OBSTACLE1D_H
#define OBSTACLE1D_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ObsInnerSolver {
  OBS_INNER_SOLVER_ACTIVE_SET = 0,
  OBS_INNER_SOLVER_SWEEPS = 1,
} ObsInnerSolver;

typedef enum ObsStatus {
  OBS_STATUS_OK = 0,
  OBS_STATUS_NULL_POINTER = 1,
  OBS_STATUS_INVALID_ARGUMENT = 2,
  OBS_STATUS_INVALID_MESH = 3,
  OBS_STATUS_INCOMPATIBLE_MESH = 4,
  OBS_STATUS_SINGULAR_SYSTEM = 5,
  OBS_STATUS_INFEASIBLE = 6,
  OBS_STATUS_UNDEFINED_INDEX = 7,
  OBS_STATUS_BUFFER_TOO_SMALL = 8,
  OBS_STATUS_IO = 9,
  OBS_STATUS_PANIC = 10,
} ObsStatus;

typedef struct ObsMajorant ObsMajorant;

typedef struct ObsMesh ObsMesh;

typedef struct ObsUzawa ObsUzawa;

/**
 * Parameters for [`obs_majorant_minimize`]. Obtain defaults from
 * [`obs_majorant_config_default`].
 */
typedef struct ObsMajorantConfig {
  size_t n_iterations;
  /**
   * Iterations after which beta is recomputed; may be null when
   * `n_beta_updates` is 0.
   */
  const size_t *beta_updates;
  size_t n_beta_updates;
  double beta0;
  double mu0;
  double c_constant;
  enum ObsInnerSolver inner;
} ObsMajorantConfig;

typedef struct ObsBreakdown {
  double beta;
  double term_flux;
  double term_residual;
  double term_obstacle;
  double total;
} ObsBreakdown;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the thread's last error message into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length without the NUL.
 */
size_t obs_last_error_message(char *buf, size_t len);

/**
 * Uniform mesh of `n_nodes` points on [0, 1].
 */
enum ObsStatus obs_mesh_uniform(size_t n_nodes, struct ObsMesh **out);

/**
 * Mesh through the given strictly increasing nodes from 0 to 1.
 */
enum ObsStatus obs_mesh_from_nodes(const double *nodes, size_t len, struct ObsMesh **out);

size_t obs_mesh_n_nodes(const struct ObsMesh *mesh);

void obs_mesh_free(struct ObsMesh *mesh);

/**
 * Minimum energy `J(u)` of the constant-data benchmark (`f < 0`, `phi < 0`).
 */
enum ObsStatus obs_exact_energy(double f, double phi, double *out);

/**
 * `½‖v − u‖²_E` for nodal values `values` on `mesh`.
 */
enum ObsStatus obs_half_energy_error(double f,
                                     double phi,
                                     const struct ObsMesh *mesh,
                                     const double *values,
                                     size_t len,
                                     double *out);

/**
 * `J(v) − J(u)` for nodal values `values` on `mesh`.
 */
enum ObsStatus obs_energy_gap(double f,
                              double phi,
                              const struct ObsMesh *mesh,
                              const double *values,
                              size_t len,
                              double *out);

enum ObsStatus obs_efficiency_indices(double half_err,
                                      double gap,
                                      double majorant,
                                      double *energy_index,
                                      double *majorant_index);

enum ObsStatus obs_uzawa_solve(double f,
                               double phi,
                               const struct ObsMesh *mesh,
                               double rho,
                               size_t n_iterations,
                               struct ObsUzawa **out);

/**
 * Raw nodal values of the final iterate.
 */
enum ObsStatus obs_uzawa_values(const struct ObsUzawa *h, double *buf, size_t len);

/**
 * Nodal values of the final iterate clamped to `v ≥ phi`.
 */
enum ObsStatus obs_uzawa_feasible_values(const struct ObsUzawa *h,
                                         double phi,
                                         double *buf,
                                         size_t len);

/**
 * Elementwise multiplier, one value per element.
 */
enum ObsStatus obs_uzawa_multiplier(const struct ObsUzawa *h, double *buf, size_t len);

enum ObsStatus obs_uzawa_infeasibility(const struct ObsUzawa *h, double *out);

void obs_uzawa_free(struct ObsUzawa *h);

struct ObsMajorantConfig obs_majorant_config_default(void);

/**
 * Minimizes the majorant for the feasible nodal approximation `values`.
 */
enum ObsStatus obs_majorant_minimize(double f,
                                     double phi,
                                     const struct ObsMesh *mesh,
                                     const double *values,
                                     size_t len,
                                     const struct ObsMajorantConfig *config,
                                     struct ObsMajorant **out);

enum ObsStatus obs_majorant_breakdown(const struct ObsMajorant *h, struct ObsBreakdown *out);

/**
 * Nodal values of the optimal flux.
 */
enum ObsStatus obs_majorant_flux(const struct ObsMajorant *h, double *buf, size_t len);

/**
 * Elementwise optimal multiplier.
 */
enum ObsStatus obs_majorant_multiplier(const struct ObsMajorant *h, double *buf, size_t len);

void obs_majorant_free(struct ObsMajorant *h);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* OBSTACLE1D_H */
