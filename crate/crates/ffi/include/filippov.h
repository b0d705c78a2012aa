#ifndef FILIPPOV_H
#define FILIPPOV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FlMode {
  FL_MODE_CHECK1 = 0,
  FL_MODE_CHECK2 = 1,
  FL_MODE_SIMULATE = 2,
  FL_MODE_ALL = 3,
} FlMode;

typedef enum FlStatus {
  FL_STATUS_OK = 0,
  /**
   * A requested check ran and failed.
   */
  FL_STATUS_CHECK_FAILED = 1,
  /**
   * Integrator abort, evaluation error or I/O failure.
   */
  FL_STATUS_RUNTIME_ERROR = 2,
  FL_STATUS_NULL_POINTER = 3,
  FL_STATUS_INVALID_ARGUMENT = 4,
  /**
   * The scenario could not be read or parsed.
   */
  FL_STATUS_LOAD_ERROR = 5,
  FL_STATUS_PANIC = 6,
} FlStatus;

/**
 * Opaque scenario handle.
 */
typedef struct FlScenario FlScenario;

/**
 * Opaque trajectory handle.
 */
typedef struct FlTrajectory FlTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or NULL.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *fl_last_error(void);

/**
 * Loads and validates a scenario file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a writable pointer.
 */
enum FlStatus fl_scenario_load(const char *path, struct FlScenario **out);

/**
 * Parses scenario text held in memory.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum FlStatus fl_scenario_parse(const char *text, struct FlScenario **out);

/**
 * # Safety
 * `scenario` must come from `fl_scenario_load`/`fl_scenario_parse` and not
 * have been freed. NULL is ignored.
 */
void fl_scenario_free(struct FlScenario *scenario);

/**
 * State dimension, or 0 for NULL.
 *
 * # Safety
 * `scenario` must be NULL or a live handle.
 */
size_t fl_scenario_dimension(const struct FlScenario *scenario);

/**
 * Integrates the scenario's `[simulate]` section.
 *
 * # Safety
 * `scenario` must be a live handle and `out` a writable pointer.
 */
enum FlStatus fl_simulate(const struct FlScenario *scenario, struct FlTrajectory **out);

/**
 * # Safety
 * `trajectory` must come from `fl_simulate` and not have been freed. NULL is ignored.
 */
void fl_trajectory_free(struct FlTrajectory *trajectory);

/**
 * Number of samples, or 0 for NULL.
 *
 * # Safety
 * `trajectory` must be NULL or a live handle.
 */
size_t fl_trajectory_len(const struct FlTrajectory *trajectory);

/**
 * Copies sample `index`: its time into `*t` and its state into `x[0..n)`.
 *
 * # Safety
 * `trajectory` must be a live handle, `t` writable and `x` writable for `n` doubles.
 */
enum FlStatus fl_trajectory_sample(const struct FlTrajectory *trajectory,
                                   size_t index,
                                   double *t,
                                   double *x,
                                   size_t n);

/**
 * 1 if sample `index` is sliding on some surface, 0 if not, -1 on bad input.
 *
 * # Safety
 * `trajectory` must be NULL or a live handle.
 */
int fl_trajectory_sliding(const struct FlTrajectory *trajectory, size_t index);

/**
 * Interval `[lower, upper]` of the set-valued derivative of the scenario's
 * candidate at `(x, t)`; `lower > upper` encodes the empty set.
 *
 * # Safety
 * `scenario` must be a live handle, `x` readable for `n` doubles, and
 * `lower`/`upper` writable.
 */
enum FlStatus fl_setvalued_derivative(const struct FlScenario *scenario,
                                      const double *x,
                                      size_t n,
                                      double t,
                                      double *lower,
                                      double *upper);

/**
 * Runs the pipeline and writes its files into `outdir`.
 *
 * Returns `FL_STATUS_OK`, `FL_STATUS_CHECK_FAILED` or `FL_STATUS_RUNTIME_ERROR`,
 * matching the command-line exit codes 0, 1 and 2.
 *
 * # Safety
 * `scenario` must be a live handle and `outdir` a NUL-terminated string.
 */
enum FlStatus fl_run(const struct FlScenario *scenario, enum FlMode mode, const char *outdir);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FILIPPOV_H */
