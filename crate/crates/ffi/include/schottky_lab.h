/* C interface to the schottky-lab library. */

#ifndef SCHOTTKY_LAB_H
#define SCHOTTKY_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every library call.
typedef enum SlStatus {
  // The call succeeded.
  SL_OK = 0,
  // A required pointer argument was NULL.
  SL_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  SL_INVALID_UTF8 = 2,
  // Input JSON could not be parsed.
  SL_PARSE_ERROR = 3,
  // Arguments were outside the admissible domain.
  SL_INVALID_ARGUMENT = 4,
  // The computation failed; see sl_last_error_message().
  SL_COMPUTATION_ERROR = 5,
} SlStatus;

// Selects one of the exhaustive combinatorial proofs.
typedef enum SlProveTarget {
  // Combined genus-3 impossibility trace.
  SL_PROVE_GENUS3 = 0,
  // Superstrand counting bound (maximum 10).
  SL_PROVE_SUPERSTRAND = 1,
  // Uniqueness of the 4-regular graph on six vertices.
  SL_PROVE_OCTAHEDRON = 2,
  // Emptiness of the cube-labeling search.
  SL_PROVE_CUBE = 3,
} SlProveTarget;

// Opaque handle to a parsed circle marking.
typedef struct SlMarking SlMarking;

// A point of the extended complex plane for FFI transport.
typedef struct SlPoint {
  double re;
  double im;
  // Nonzero marks the point at infinity; re and im are then ignored.
  uint8_t is_infinity;
} SlPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string; do not free.
const char *sl_version(void);

// The message for the most recent error on this thread, or NULL. The
// caller owns the returned string and frees it with sl_string_free().
char *sl_last_error_message(void);

// Releases a string allocated by this library. NULL is ignored.
//
// # Safety
// `s` must have been returned by a schottky-lab function and not yet freed.
void sl_string_free(char *s);

// Releases a byte buffer allocated by this library. NULL is ignored.
//
// # Safety
// `data` and `len` must come from a schottky-lab function, unmodified.
void sl_bytes_free(uint8_t *data, size_t len);

// Parses a marking from its JSON representation.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be a valid pointer.
enum SlStatus sl_marking_parse(const char *json, struct SlMarking **out);

// Releases a marking handle. NULL is ignored.
//
// # Safety
// `marking` must come from sl_marking_parse and not be freed twice.
void sl_marking_free(struct SlMarking *marking);

// Reads the genus of a marking.
//
// # Safety
// `marking` must be a live handle; `genus` a valid pointer.
enum SlStatus sl_marking_genus(const struct SlMarking *marking, uint32_t *genus);

// Runs the classical verification. `pass` receives the verdict and
// `report_json` the full condition-keyed report.
//
// # Safety
// `marking` must be a live handle; `pass` and `report_json` valid pointers.
enum SlStatus sl_marking_verify_classical(const struct SlMarking *marking,
                                          bool *pass,
                                          char **report_json);

// Runs the noded verification. Crossing or nested defining circles are
// reported as SlInvalidArgument.
//
// # Safety
// `marking` must be a live handle; `pass` and `report_json` valid pointers.
enum SlStatus sl_marking_verify_noded(const struct SlMarking *marking,
                                      bool *pass,
                                      char **report_json);

// Renders the limit set as an SVG document.
//
// # Safety
// `marking` must be a live handle; `svg` a valid pointer.
enum SlStatus sl_marking_limit_set_svg(const struct SlMarking *marking, uint32_t depth, char **svg);

// Renders the limit set as a binary PPM image into a fresh buffer.
//
// # Safety
// `marking` must be a live handle; `data` and `len` valid pointers.
enum SlStatus sl_marking_limit_set_ppm(const struct SlMarking *marking,
                                       uint32_t depth,
                                       uint32_t width,
                                       uint32_t height,
                                       uint8_t **data,
                                       size_t *len);

// Cusp-gap certificate |y1 - y2| >= alpha / 4.
//
// # Safety
// `pass` and `certificate_json` must be valid pointers.
enum SlStatus sl_certify_cusp_gap(double alpha,
                                  double y1,
                                  double y2,
                                  double tolerance,
                                  bool *pass,
                                  char **certificate_json);

// Slope certificate: disjointness of the ray arg z = theta from its image
// under the comparison map.
//
// # Safety
// `pass` and `certificate_json` must be valid pointers.
enum SlStatus sl_certify_slope(double theta, bool *pass, char **certificate_json);

// Non-circularity certificate: |Im| of the cross-ratio of four points
// against a threshold such as 1/8, 1/16 or 1/32.
//
// # Safety
// `points` must point to 4 elements; `pass` and `certificate_json` must be
// valid pointers.
enum SlStatus sl_certify_cross_ratio(const struct SlPoint *points,
                                     double threshold,
                                     double tolerance,
                                     bool *pass,
                                     char **certificate_json);

// Replays one of the exhaustive combinatorial proofs; `pass` reports
// whether the trace matches the expected outcome.
//
// # Safety
// `pass` and `trace_json` must be valid pointers.
enum SlStatus sl_prove(enum SlProveTarget target, bool *pass, char **trace_json);

// Pinchability report for words given as {"rank": p, "words": [[...]]}.
//
// # Safety
// `json` must be a NUL-terminated string; `pass` and `report_json` valid
// pointers.
enum SlStatus sl_words_check(const char *json, bool *pass, char **report_json);

// The rank-2 family word of index n as a JSON letter list.
//
// # Safety
// `word_json` must be a valid pointer.
enum SlStatus sl_words_family(uint32_t n, char **word_json);

// The explicit genus-3 pinchable triple as JSON.
//
// # Safety
// `words_json` must be a valid pointer.
enum SlStatus sl_words_genus3(char **words_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCHOTTKY_LAB_H */
