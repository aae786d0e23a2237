#ifndef ORIGAMI_KZ_H
#define ORIGAMI_KZ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes; the nonzero values below 7 match the exit codes of the
// `origami` binary.
typedef enum OkzStatus {
  OKZ_STATUS_OK = 0,
  OKZ_STATUS_FAILURE = 1,
  OKZ_STATUS_PARSE = 2,
  OKZ_STATUS_NOT_TRANSITIVE = 3,
  OKZ_STATUS_NOT_VEECH_FULL = 4,
  OKZ_STATUS_UNDECIDED = 5,
  OKZ_STATUS_CENSUS_LIMIT = 6,
  OKZ_STATUS_NULL_POINTER = 7,
  OKZ_STATUS_INVALID_UTF8 = 8,
} OkzStatus;

// Opaque handle to a square-tiled surface.
typedef struct OkzOrigami OkzOrigami;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a surface from cycle notation; `n = 0` infers the square count.
//
// # Safety
// `h` and `v` must be NUL-terminated strings and `out` a valid pointer.
enum OkzStatus okz_origami_new(const char *h, const char *v, size_t n, struct OkzOrigami **out);

// Builds a surface from the JSON input format (`name`, `h`, `v`, `n`).
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum OkzStatus okz_origami_from_json(const char *json, struct OkzOrigami **out);

// # Safety
// `o` must come from this library and not be used afterwards.
void okz_origami_free(struct OkzOrigami *o);

// # Safety
// `o` must be a live handle and `out` a valid pointer.
enum OkzStatus okz_origami_squares(const struct OkzOrigami *o, size_t *out);

// # Safety
// `o` must be a live handle and `out` a valid pointer.
enum OkzStatus okz_origami_genus(const struct OkzOrigami *o, size_t *out);

// # Safety
// `o` must be a live handle and `out` a valid pointer.
enum OkzStatus okz_origami_is_veech_full(const struct OkzOrigami *o, bool *out);

// Invariants as JSON, in the default directions.
//
// # Safety
// `o` must be a live handle and `out` a valid pointer.
enum OkzStatus okz_analyze_json(const struct OkzOrigami *o, char **out);

// # Safety
// `o` must be a live handle and `out` a valid pointer.
enum OkzStatus okz_monodromy_json(const struct OkzOrigami *o, char **out);

// All certificates with default words; `OkzStatus::Undecided` still
// writes the report.
//
// # Safety
// `o` must be a live handle and `out` a valid pointer.
enum OkzStatus okz_certify_json(const struct OkzOrigami *o, char **out);

// # Safety
// `o` must be a live handle and `out` a valid pointer.
enum OkzStatus okz_lyapunov_json(const struct OkzOrigami *o,
                                 uint64_t iterations,
                                 size_t trials,
                                 uint64_t seed,
                                 char **out);

// # Safety
// `out` must be a valid pointer.
enum OkzStatus okz_census_json(size_t max_squares, char **out);

// # Safety
// `s` must come from this library and not be used afterwards.
void okz_string_free(char *s);

// Message of the last failed call on this thread; owned by the library
// and valid until the next call.
const char *okz_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORIGAMI_KZ_H */
