#ifndef CONTACTLAB_H
#define CONTACTLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by every fallible function.
typedef enum ClStatus {
  CL_STATUS_OK = 0,
  CL_STATUS_NULL_POINTER = 1,
  CL_STATUS_INVALID_UTF8 = 2,
  CL_STATUS_PARSE = 3,
  CL_STATUS_INVALID_INPUT = 4,
  CL_STATUS_PRECONDITION = 5,
  CL_STATUS_UNDEFINED = 6,
  CL_STATUS_LIMIT_EXCEEDED = 7,
  CL_STATUS_OVERFLOW = 8,
  CL_STATUS_INTERNAL = 9,
} ClStatus;

// Generator selector for [`cl_family_generate`].
typedef enum ClGenerator {
  CL_GENERATOR_POINT_CLIQUE = 0,
  CL_GENERATOR_FPB_EXTREMAL = 1,
  CL_GENERATOR_RANDOM_CURVES = 2,
  CL_GENERATOR_BAD_QUAD = 3,
  CL_GENERATOR_RANDOM_REGIONS = 4,
} ClGenerator;

// Coloring algorithm for [`cl_family_color`].
typedef enum ClColorMode {
  CL_COLOR_MODE_K_PLUS_ONE = 0,
  CL_COLOR_MODE_GREEDY = 1,
} ClColorMode;

// Opaque plane digraph.
typedef struct ClDigraph ClDigraph;

// Opaque touching family.
typedef struct ClFamily ClFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer is
// valid until the next call into this library on the same thread.
const char *cl_last_error(void);

// Library version as a static NUL-terminated string.
const char *cl_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void cl_string_free(char *s);

// Parses a family from its JSON document.
//
// # Safety
// `json` must be a NUL-terminated string and `out_family` writable.
enum ClStatus cl_family_from_json(const char *json, struct ClFamily **out_family);

// Runs a generator. Parameters a generator does not use are ignored.
//
// # Safety
// `out_family` must be writable.
enum ClStatus cl_family_generate(enum ClGenerator generator,
                                 size_t n,
                                 size_t k,
                                 uint64_t seed,
                                 double nest_prob,
                                 struct ClFamily **out_family);

// Releases a family. Null is ignored.
//
// # Safety
// `family` must come from this library and not have been freed.
void cl_family_free(struct ClFamily *family);

// Number of curves in the family, or 0 for null.
//
// # Safety
// `family` must be null or a live handle.
size_t cl_family_curve_count(const struct ClFamily *family);

// Serializes the family to JSON.
//
// # Safety
// `family` must be a live handle and `out_json` writable.
enum ClStatus cl_family_to_json(const struct ClFamily *family, char **out_json);

// Family statistics (n, m, k_effective, average distance) as JSON.
//
// # Safety
// `family` must be a live handle and `out_json` writable.
enum ClStatus cl_family_stats_json(const struct ClFamily *family, char **out_json);

// Number of curves separating the two named curves.
//
// # Safety
// `family` must be a live handle, names NUL-terminated, `out_distance` writable.
enum ClStatus cl_family_distance(const struct ClFamily *family,
                                 const char *a,
                                 const char *b,
                                 size_t *out_distance);

// Exact mean distance over touching pairs as a reduced fraction, before
// normalizing by k.
//
// # Safety
// `family` must be a live handle and both out-pointers writable.
enum ClStatus cl_family_average_distance(const struct ClFamily *family,
                                         uint64_t *out_numer,
                                         uint64_t *out_denom);

// Colors the curves. `out_colors` receives one color per curve and must
// hold `cl_family_curve_count` entries. `k` is used by the k+1 mode only;
// pass 0 to use the family's own bound.
//
// # Safety
// `family` must be a live handle, `out_colors` must hold enough entries
// and `out_palette` must be writable.
enum ClStatus cl_family_color(const struct ClFamily *family,
                              enum ClColorMode mode,
                              size_t k,
                              size_t *out_colors,
                              size_t *out_palette);

// Runs the discharging verifier with default constants and returns the
// report as JSON. `k` of 0 uses the family's own bound.
//
// # Safety
// `family` must be a live handle and `out_json` writable.
enum ClStatus cl_family_discharge_json(const struct ClFamily *family, size_t k, char **out_json);

// Coloring constant for average distance `alpha`.
//
// # Safety
// `out_value` must be writable.
enum ClStatus cl_beta(double alpha, double *out_value);

// Optimal sampling parameter for average distance `alpha`.
//
// # Safety
// `out_value` must be writable.
enum ClStatus cl_delta(double alpha, double *out_value);

// Probability that a pair at distance `d` inside a clique of `ell` curves
// survives sampling with probability `p` as an isolated edge.
//
// # Safety
// `out_value` must be writable.
enum ClStatus cl_p_good(size_t ell, size_t d, double p, double *out_value);

// Parses a digraph from its JSON document.
//
// # Safety
// `json` must be a NUL-terminated string and `out_digraph` writable.
enum ClStatus cl_digraph_from_json(const char *json, struct ClDigraph **out_digraph);

// Releases a digraph. Null is ignored.
//
// # Safety
// `digraph` must come from this library and not have been freed.
void cl_digraph_free(struct ClDigraph *digraph);

// Integral and fractional cycle packing. Writes the integral optimum and
// the full result as JSON.
//
// # Safety
// `digraph` must be a live handle and both out-pointers writable.
enum ClStatus cl_digraph_cyclepack(const struct ClDigraph *digraph,
                                   size_t limit,
                                   size_t *out_nu,
                                   char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONTACTLAB_H */
