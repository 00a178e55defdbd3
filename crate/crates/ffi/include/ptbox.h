#ifndef PTBOX_H
#define PTBOX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum PtboxStatus {
  PTBOX_STATUS_OK = 0,
  PTBOX_STATUS_NULL_POINTER = 1,
  PTBOX_STATUS_INVALID_ARGUMENT = 2,
  PTBOX_STATUS_CONFIG = 3,
  PTBOX_STATUS_NUMERICAL = 4,
  PTBOX_STATUS_IO = 5,
  PTBOX_STATUS_NOT_RUN = 6,
  PTBOX_STATUS_OUT_OF_RANGE = 7,
  PTBOX_STATUS_PANIC = 8,
} PtboxStatus;

typedef enum PtboxWallKind {
  PTBOX_WALL_KIND_STATIC = 0,
  PTBOX_WALL_KIND_HARMONIC = 1,
  PTBOX_WALL_KIND_EXPANDING = 2,
  PTBOX_WALL_KIND_CONTRACTING = 3,
} PtboxWallKind;

/*
 Opaque simulation handle.
 */
typedef struct PtboxSimulation PtboxSimulation;

/*
 Observables of one sample.
 */
typedef struct PtboxObservables {
  double t;
  double length;
  double velocity;
  double norm;
  double energy;
  double energy_over_norm;
  double force;
  double position;
} PtboxObservables;

typedef struct PtboxBerryPhase {
  double analytic_re;
  double analytic_im;
  double numeric_re;
  double numeric_im;
  double discrepancy;
} PtboxBerryPhase;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or NULL. The pointer stays
 valid until the next failing call on the same thread.
 */
const char *ptbox_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *ptbox_version(void);

/*
 Creates a simulation from a TOML config file (or a JSON run manifest).
 */
enum PtboxStatus ptbox_simulation_from_config_file(const char *path, struct PtboxSimulation **out);

/*
 Creates a simulation starting in cosine mode `initial_mode`.
 `omega` is ignored for non-harmonic walls, `b` for static ones.
 */
enum PtboxStatus ptbox_simulation_new(enum PtboxWallKind kind,
                                      double a,
                                      double b,
                                      double omega,
                                      double alpha,
                                      size_t n_modes,
                                      double t_final,
                                      double dt,
                                      double sample_interval,
                                      size_t initial_mode,
                                      struct PtboxSimulation **out);

/*
 Integrates the configured run; previous results are replaced.
 */
enum PtboxStatus ptbox_simulation_run(struct PtboxSimulation *sim);

/*
 Number of recorded samples; 0 before a successful run or for NULL.
 */
size_t ptbox_simulation_sample_count(const struct PtboxSimulation *sim);

/*
 Number of basis modes (population columns).
 */
size_t ptbox_simulation_mode_count(const struct PtboxSimulation *sim);

/*
 Copies the observables of sample `index` into `out`.
 */
enum PtboxStatus ptbox_simulation_observables(const struct PtboxSimulation *sim,
                                              size_t index,
                                              struct PtboxObservables *out);

/*
 Copies |C_n|² of sample `index` into `buffer`, which must hold `len` doubles
 with `len` ≥ the mode count.
 */
enum PtboxStatus ptbox_simulation_populations(const struct PtboxSimulation *sim,
                                              size_t index,
                                              double *buffer,
                                              size_t len);

/*
 Writes the observables table as CSV.
 */
enum PtboxStatus ptbox_simulation_write_csv(const struct PtboxSimulation *sim, const char *path);

/*
 Releases a handle. NULL is ignored.
 */
void ptbox_simulation_free(struct PtboxSimulation *sim);

/*
 E_n = π²n²/(2L²) of the static box.
 */
enum PtboxStatus ptbox_static_eigenvalue(uint32_t n, double length, double *out);

/*
 Geometric phase for L(t) = a + b cos(ωt), closed form and quadrature.
 */
enum PtboxStatus ptbox_berry_phase(uint32_t n,
                                   double a,
                                   double b,
                                   double alpha,
                                   double omega,
                                   size_t steps,
                                   struct PtboxBerryPhase *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PTBOX_H */
