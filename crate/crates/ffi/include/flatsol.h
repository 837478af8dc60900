#ifndef FLATSOL_H
#define FLATSOL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum FlatsolStatus {
  FLATSOL_STATUS_OK = 0,
  FLATSOL_STATUS_NULL_POINTER = 1,
  FLATSOL_STATUS_INVALID_UTF8 = 2,
  FLATSOL_STATUS_PARSE = 3,
  FLATSOL_STATUS_INVALID = 4,
  FLATSOL_STATUS_UNKNOWN_NAME = 5,
  FLATSOL_STATUS_INSUFFICIENT_DATA = 6,
  FLATSOL_STATUS_PANIC = 7,
} FlatsolStatus;

/**
 * An expanding endomorphism of a flat manifold.
 */
typedef struct FlatsolEndo FlatsolEndo;

/**
 * A computed invariant report with its checks.
 */
typedef struct FlatsolReport FlatsolReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Valid until the next
 * failing call on the same thread; never null.
 */
const char *flatsol_last_error(void);

/**
 * Library version, static storage.
 */
const char *flatsol_version(void);

/**
 * Looks up a builtin endomorphism such as `"klein9"`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FlatsolStatus flatsol_endo_builtin(const char *name, struct FlatsolEndo **out);

/**
 * Parses and validates an endomorphism definition in TOML.
 *
 * # Safety
 * `definition` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FlatsolStatus flatsol_endo_from_toml(const char *definition, struct FlatsolEndo **out);

/**
 * # Safety
 * `endo` must come from this library and not be freed twice. Null is ignored.
 */
void flatsol_endo_free(struct FlatsolEndo *endo);

/**
 * Dimension of the underlying manifold.
 *
 * # Safety
 * `endo` must be a live handle and `out` a valid pointer.
 */
enum FlatsolStatus flatsol_endo_dimension(const struct FlatsolEndo *endo, size_t *out);

/**
 * Computes the invariant report and runs all checks.
 *
 * # Safety
 * `endo` must be a live handle and `out` a valid pointer.
 */
enum FlatsolStatus flatsol_report_compute(const struct FlatsolEndo *endo,
                                          struct FlatsolReport **out);

/**
 * # Safety
 * `report` must come from this library and not be freed twice. Null is ignored.
 */
void flatsol_report_free(struct FlatsolReport *report);

/**
 * The report as a JSON document, borrowed from the handle.
 *
 * # Safety
 * `report` must be a live handle; the result lives as long as it does.
 */
const char *flatsol_report_json(const struct FlatsolReport *report);

/**
 * Number of checks with status `fail`.
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum FlatsolStatus flatsol_report_failed_checks(const struct FlatsolReport *report, size_t *out);

/**
 * Canonical form of one graded entry, e.g. `("stable_homology", 0)`.
 *
 * # Safety
 * `report` must be a live handle, `graded` a NUL-terminated string and
 * `out` a valid pointer. Release the result with `flatsol_string_free`.
 */
enum FlatsolStatus flatsol_report_graded(const struct FlatsolReport *report,
                                         const char *graded,
                                         size_t degree,
                                         char **out);

/**
 * `|Per_k|` as a decimal string.
 *
 * # Safety
 * `endo` must be a live handle and `out` a valid pointer. Release the
 * result with `flatsol_string_free`.
 */
enum FlatsolStatus flatsol_periodic_points(const struct FlatsolEndo *endo, uint32_t k, char **out);

/**
 * Canonical rendering of a group or limit group string such as
 * `"Z/6 (+) Z/4"` or `"Z[1/9] (+) Z/2"`.
 *
 * # Safety
 * `group` must be a NUL-terminated string and `out` a valid pointer.
 * Release the result with `flatsol_string_free`.
 */
enum FlatsolStatus flatsol_canonicalize_group(const char *group, char **out);

/**
 * # Safety
 * `s` must be a string returned by this library, or null.
 */
void flatsol_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLATSOL_H */
