/* C interface to the matchbound library. Generated by cbindgen. */

#ifndef MATCHBOUND_H
#define MATCHBOUND_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code of every fallible call.
typedef enum MbStatus {
  MB_STATUS_OK = 0,
  MB_STATUS_NULL_POINTER = 1,
  MB_STATUS_INVALID_ARGUMENT = 2,
  MB_STATUS_VERIFICATION_FAILED = 3,
  MB_STATUS_LIMIT_EXCEEDED = 4,
  MB_STATUS_BUFFER_TOO_SMALL = 5,
  MB_STATUS_INTERNAL_ERROR = 6,
} MbStatus;

// Opaque handle: the projective graph with its adjacency and Gram data.
typedef struct MbGraph MbGraph;

// Opaque handle: the canonically ordered projective space.
typedef struct MbSpace MbSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *mb_version(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or a pointer previously returned through a `char**`
// out-parameter of this library, not yet freed.
void mb_string_free(char *s);

// Number of projective points theta_{n,m}.
//
// # Safety
// `out` must be null or a valid writable u64 slot.
enum MbStatus mb_theta(uint32_t n, uint64_t m, uint64_t *out);

// The prime cap kappa = floor(4 r^(n/2) + 2).
//
// # Safety
// `out` must be null or a valid writable u64 slot.
enum MbStatus mb_kappa(uint64_t prime, uint32_t n, uint64_t *out);

// Builds the projective space for n >= 2, m >= 2.
//
// # Safety
// `out` must be null or a valid writable pointer slot.
enum MbStatus mb_space_new(uint32_t n, uint64_t m, struct MbSpace **out);

// # Safety
// `space` must be null or a pointer from `mb_space_new`, not yet freed.
void mb_space_free(struct MbSpace *space);

// # Safety
// `space` must be a live pointer from `mb_space_new`.
enum MbStatus mb_space_len(const struct MbSpace *space, uint64_t *out);

// Copies the entries of point `index` into `out_entries` (capacity slots).
//
// # Safety
// `space` must be live; `out_entries` must point to at least `capacity`
// writable u64 slots.
enum MbStatus mb_space_point(const struct MbSpace *space,
                             uint64_t index,
                             uint64_t *out_entries,
                             uint64_t capacity);

// Finds the canonical position of the class of `entries`.
//
// # Safety
// `space` must be live; `entries` must point to `len` readable u64s.
enum MbStatus mb_space_locate(const struct MbSpace *space,
                              const uint64_t *entries,
                              uint64_t len,
                              uint64_t *out_index);

// Builds the projective graph (adjacency and Gram matrices) for (n, m).
//
// # Safety
// `out` must be null or a valid writable pointer slot.
enum MbStatus mb_graph_new(uint32_t n, uint64_t m, struct MbGraph **out);

// # Safety
// `graph` must be null or a pointer from `mb_graph_new`, not yet freed.
void mb_graph_free(struct MbGraph *graph);

// Common degree theta_{n-1,m}.
//
// # Safety
// `graph` must be a live pointer from `mb_graph_new`.
enum MbStatus mb_graph_degree(const struct MbGraph *graph, uint64_t *out);

// Whether point u and hyperplane v are adjacent.
//
// # Safety
// `graph` must be live.
enum MbStatus mb_graph_adjacent(const struct MbGraph *graph, uint64_t u, uint64_t v, bool *out);

// |N(X)| for the point set X given as indices.
//
// # Safety
// `graph` must be live; `indices` must point to `len` readable u64s (or
// be null when `len` is zero).
enum MbStatus mb_graph_neighborhood_size(const struct MbGraph *graph,
                                         const uint64_t *indices,
                                         uint64_t len,
                                         uint64_t *out);

// Whether the point set has the unique neighbor property.
//
// # Safety
// Same contract as `mb_graph_neighborhood_size`.
enum MbStatus mb_graph_unp_check(const struct MbGraph *graph,
                                 const uint64_t *indices,
                                 uint64_t len,
                                 bool *out_satisfied);

// chi^t B chi for the point set X.
//
// # Safety
// Same contract as `mb_graph_neighborhood_size`.
enum MbStatus mb_graph_gram_quadratic(const struct MbGraph *graph,
                                      const uint64_t *indices,
                                      uint64_t len,
                                      uint64_t *out);

// Full bound report as a JSON string (see the CLI schema). `x = 0` picks
// the theorem default floor(ell^0.625).
//
// # Safety
// `out_json` must be null or a valid writable pointer slot.
enum MbStatus mb_bounds_report_json(uint32_t n,
                                    uint64_t p,
                                    uint64_t q,
                                    uint64_t x,
                                    char **out_json);

// Predicted spectrum as JSON: [{"lambda": .., "multiplicity": ..}].
//
// # Safety
// `out_json` must be null or a valid writable pointer slot.
enum MbStatus mb_spectrum_json(uint32_t n, uint64_t m, char **out_json);

// Verifies a family JSON document. Returns Ok with `out_ok = false` (and
// a diagnostic report) when the family is well-formed but not matching;
// malformed documents return an error status.
//
// # Safety
// `json` must be a NUL-terminated UTF-8 string.
enum MbStatus mb_family_verify_json(const char *json, bool *out_ok, char **out_report);

// Exact maximum matching-family size over Z_m^n with the default cross
// set; the witness report lands in `out_json`.
//
// # Safety
// `out_k` and `out_json` must be null or valid writable slots.
enum MbStatus mb_search_max(uint64_t m,
                            uint32_t n,
                            uint64_t limit,
                            uint64_t *out_k,
                            char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MATCHBOUND_H */
