#ifndef STATIONKEEP_H
#define STATIONKEEP_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SkStatus {
  SK_STATUS_OK = 0,
  SK_STATUS_NULL_POINTER = 1,
  SK_STATUS_INVALID_UTF8 = 2,
  SK_STATUS_INVALID_ARGUMENT = 3,
  SK_STATUS_CONFIG = 4,
  SK_STATUS_SIMULATION = 5,
  SK_STATUS_IO = 6,
  SK_STATUS_OUT_OF_RANGE = 7,
  SK_STATUS_PANIC = 8,
} SkStatus;

/**
 * Allocator with its actuator filters.
 */
typedef struct SkAllocator SkAllocator;

/**
 * Finished simulation log.
 */
typedef struct SkLog SkLog;

typedef struct SkLambdaSelection {
  double rotation;
  double sampling;
  double rise_time;
  double selected;
} SkLambdaSelection;

typedef struct SkWrench {
  double x;
  double y;
  double n;
} SkWrench;

typedef struct SkThrusterSetpoint {
  double port_thrust;
  double starboard_thrust;
  double port_azimuth;
  double starboard_azimuth;
} SkThrusterSetpoint;

/**
 * One control tick of a log: time, true pose and velocity, tracking error,
 * controller wrench, thruster output after filtering.
 */
typedef struct SkLogSample {
  double t_s;
  double eta[3];
  double nu[3];
  double error[3];
  struct SkWrench tau;
  struct SkThrusterSetpoint output;
  bool saturated;
} SkLogSample;

typedef struct SkErrorStats {
  double mean_position_m;
  double std_position_m;
  double mean_heading_deg;
  double std_heading_deg;
} SkErrorStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call into the library from the same thread.
 */
const char *sk_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sk_version(void);

/**
 * Static thrust in newtons for a motor command in percent.
 *
 * # Safety
 * `out` must be null or point to writable memory for one `double`.
 */
enum SkStatus sk_thrust_from_command(double command_pct, double *out);

/**
 * Bandwidth candidates for a rotational bandwidth, control rate and
 * actuator rise time.
 *
 * # Safety
 * `out` must be null or point to a writable `SkLambdaSelection`.
 */
enum SkStatus sk_select_lambda(double rotation_hz,
                               double sample_hz,
                               double rise_time_s,
                               struct SkLambdaSelection *out);

/**
 * Allocator for the default vehicle, or for a TOML allocator config when
 * `config_toml` is non-null.
 *
 * # Safety
 * `config_toml` must be null or a NUL-terminated string; `out` must point
 * to writable storage for one pointer.
 */
enum SkStatus sk_allocator_new(const char *config_toml, struct SkAllocator **out);

/**
 * Allocates `tau` and advances the actuator filters by `dt`. Writes the
 * filtered thruster output and whether a thrust limit was hit.
 *
 * # Safety
 * `alloc` must come from [`sk_allocator_new`]; `out` must be writable;
 * `saturated` may be null.
 */
enum SkStatus sk_allocator_step(struct SkAllocator *alloc,
                                struct SkWrench tau,
                                double dt,
                                struct SkThrusterSetpoint *out,
                                bool *saturated);

/**
 * Clears the actuator filters.
 *
 * # Safety
 * `alloc` must come from [`sk_allocator_new`].
 */
enum SkStatus sk_allocator_reset(struct SkAllocator *alloc);

/**
 * # Safety
 * `alloc` must be null or come from [`sk_allocator_new`], and not be used
 * afterwards.
 */
void sk_allocator_free(struct SkAllocator *alloc);

/**
 * Runs a closed-loop scenario given as TOML. `sim_toml` may be null for
 * the default settings.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must point to
 * writable storage for one pointer.
 */
enum SkStatus sk_run_scenario(const char *scenario_toml, const char *sim_toml, struct SkLog **out);

/**
 * Number of control ticks in the log (0 for null).
 *
 * # Safety
 * `log` must be null or come from [`sk_run_scenario`].
 */
size_t sk_log_len(const struct SkLog *log);

/**
 * # Safety
 * `log` must come from [`sk_run_scenario`]; `out` must be writable.
 */
enum SkStatus sk_log_sample(const struct SkLog *log, size_t index, struct SkLogSample *out);

/**
 * # Safety
 * `log` must come from [`sk_run_scenario`]; `out` must be writable.
 */
enum SkStatus sk_log_error_stats(const struct SkLog *log, struct SkErrorStats *out);

/**
 * Writes the log as CSV with its metadata header.
 *
 * # Safety
 * `log` must come from [`sk_run_scenario`]; `path` must be NUL-terminated.
 */
enum SkStatus sk_log_write_csv(const struct SkLog *log, const char *path);

/**
 * # Safety
 * `log` must be null or come from [`sk_run_scenario`], and not be used
 * afterwards.
 */
void sk_log_free(struct SkLog *log);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STATIONKEEP_H */
