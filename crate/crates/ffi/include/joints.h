#ifndef JOINTS_H
#define JOINTS_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every function.
 */
typedef enum JointsStatus {
  JOINTS_STATUS_OK = 0,
  JOINTS_STATUS_NULL_POINTER = 1,
  JOINTS_STATUS_INVALID_UTF8 = 2,
  JOINTS_STATUS_PARSE = 3,
  JOINTS_STATUS_INVALID_INPUT = 4,
  JOINTS_STATUS_CHECK_FAILED = 5,
  JOINTS_STATUS_INTERNAL = 6,
} JointsStatus;

typedef enum JointsColorMethod {
  JOINTS_COLOR_METHOD_PRUNE = 0,
  JOINTS_COLOR_METHOD_INCREMENTAL = 1,
} JointsColorMethod;

/**
 * Opaque line arrangement.
 */
typedef struct JointsArrangement JointsArrangement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *joints_version(void);

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call on the same thread.
 */
const char *joints_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void joints_string_free(char *s);

/**
 * Parses an arrangement document (`{"dimension": n, "lines": [...]}`).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum JointsStatus joints_arrangement_from_json(const char *json, struct JointsArrangement **out);

/**
 * Axis-parallel grid with `k^n` joints.
 *
 * # Safety
 * `out` must be writable.
 */
enum JointsStatus joints_arrangement_grid(size_t n, size_t k, struct JointsArrangement **out);

/**
 * `count` lines through a single point.
 *
 * # Safety
 * `out` must be writable.
 */
enum JointsStatus joints_arrangement_star(size_t n, size_t count, struct JointsArrangement **out);

/**
 * Seeded random lines through `pool` shared points.
 *
 * # Safety
 * `out` must be writable.
 */
enum JointsStatus joints_arrangement_random(size_t n,
                                            size_t count,
                                            size_t pool,
                                            uint64_t seed,
                                            struct JointsArrangement **out);

/**
 * # Safety
 * `h` must be NULL or a handle from this library, not yet freed.
 */
void joints_arrangement_free(struct JointsArrangement *h);

/**
 * Returns 0 for a NULL handle.
 *
 * # Safety
 * `h` must be NULL or a live handle.
 */
size_t joints_arrangement_dimension(const struct JointsArrangement *h);

/**
 * Returns 0 for a NULL handle.
 *
 * # Safety
 * `h` must be NULL or a live handle.
 */
size_t joints_arrangement_line_count(const struct JointsArrangement *h);

/**
 * Serializes the arrangement back to JSON.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum JointsStatus joints_arrangement_to_json(const struct JointsArrangement *h, char **out);

/**
 * Detects joints; writes their records as a JSON array and the count to
 * `count` when it is not NULL.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable; `count` may be NULL.
 */
enum JointsStatus joints_detect(const struct JointsArrangement *h, size_t *count, char **out);

/**
 * Prunes the arrangement and writes the trace as JSON.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum JointsStatus joints_prune(const struct JointsArrangement *h, char **out);

/**
 * Replays a trace produced by [`joints_prune`]. Returns `CheckFailed` when
 * the trace does not verify.
 *
 * # Safety
 * `h` must be a live handle; `trace_json` must be a NUL-terminated string.
 */
enum JointsStatus joints_verify_trace(const struct JointsArrangement *h, const char *trace_json);

/**
 * Colors every joint by one incident line and writes
 * `{"coloring": ..., "report": ...}`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum JointsStatus joints_color(const struct JointsArrangement *h,
                               enum JointsColorMethod method,
                               char **out);

/**
 * Runs the lemma check on all joints, or on the points of `points_json`
 * (a JSON array of points) when it is not NULL.
 *
 * # Safety
 * `h` must be a live handle; `points_json` may be NULL; `out` must be
 * writable.
 */
enum JointsStatus joints_lemma(const struct JointsArrangement *h,
                               const char *points_json,
                               char **out);

/**
 * Summary row for the arrangement as JSON.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum JointsStatus joints_report(const struct JointsArrangement *h, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JOINTS_H */
