#ifndef RECOLOR_H
#define RECOLOR_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RecolorStatus {
  RECOLOR_STATUS_OK = 0,
  RECOLOR_STATUS_NULL_POINTER = 1,
  RECOLOR_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The request cannot be satisfied with the given parameters.
   */
  RECOLOR_STATUS_INFEASIBLE = 3,
  /**
   * A trace or coloring failed verification.
   */
  RECOLOR_STATUS_VERIFY_FAILED = 4,
  RECOLOR_STATUS_INTERNAL = 5,
} RecolorStatus;

/**
 * Vertex order used when a greedy round picks its next vertex.
 */
typedef enum RecolorSelector {
  RECOLOR_SELECTOR_LOWEST_ID = 0,
  RECOLOR_SELECTOR_HIGHEST_DEGREE = 1,
  /**
   * Seeded by the `seed` argument of the calling function.
   */
  RECOLOR_SELECTOR_RANDOM = 2,
} RecolorSelector;

typedef struct RecolorColoring RecolorColoring;

typedef struct RecolorGraph RecolorGraph;

typedef struct RecolorTrace RecolorTrace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null if none failed.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *recolor_last_error(void);

/**
 * Graph on `n` vertices from `m` edges stored as `2 m` endpoint ids.
 *
 * # Safety
 * `edges` must point to `2 * m` readable `uint32_t` values (it may be null
 * when `m == 0`); `out` must be writable.
 */
enum RecolorStatus recolor_graph_from_edges(size_t n,
                                            const uint32_t *edges,
                                            size_t m,
                                            struct RecolorGraph **out);

/**
 * Uniform random graph with exactly `m` edges.
 *
 * # Safety
 * `out` must be writable.
 */
enum RecolorStatus recolor_graph_gnm(size_t n,
                                     uint64_t m,
                                     uint64_t seed,
                                     struct RecolorGraph **out);

/**
 * Planted `q`-colorable graph with exactly `m` edges and its planted coloring.
 * Seeds match `recolor gen planted --m`.
 *
 * # Safety
 * `out_graph` and `out_coloring` must be writable.
 */
enum RecolorStatus recolor_graph_planted(size_t n,
                                         size_t q,
                                         uint64_t m,
                                         uint64_t seed,
                                         struct RecolorGraph **out_graph,
                                         struct RecolorColoring **out_coloring);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t recolor_graph_n(const struct RecolorGraph *g);

/**
 * Edge count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t recolor_graph_m(const struct RecolorGraph *g);

/**
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void recolor_graph_free(struct RecolorGraph *g);

/**
 * Coloring copied from `n` color ids.
 *
 * # Safety
 * `colors` must point to `n` readable values (null allowed when `n == 0`);
 * `out` must be writable.
 */
enum RecolorStatus recolor_coloring_new(const uint32_t *colors,
                                        size_t n,
                                        struct RecolorColoring **out);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `c` must be null or a live coloring handle.
 */
size_t recolor_coloring_len(const struct RecolorColoring *c);

/**
 * Copies the colors into `buf`, which must hold `recolor_coloring_len(c)` values.
 *
 * # Safety
 * `c` must be a live coloring handle; `buf` must have room for `cap` values.
 */
enum RecolorStatus recolor_coloring_copy(const struct RecolorColoring *c,
                                         uint32_t *buf,
                                         size_t cap);

/**
 * # Safety
 * `c` must be null or a handle not yet freed.
 */
void recolor_coloring_free(struct RecolorColoring *c);

/**
 * Greedy recoloring of `g` from `sigma` with the derived threshold and a
 * palette of `q + 2 max_degree + 2` colors, `q` being `sigma`'s palette size.
 *
 * # Safety
 * `g` and `sigma` must be live handles; `out_trace` and `out_end` must be writable.
 */
enum RecolorStatus recolor_greedy(const struct RecolorGraph *g,
                                  const struct RecolorColoring *sigma,
                                  enum RecolorSelector sel,
                                  uint64_t seed,
                                  struct RecolorTrace **out_trace,
                                  struct RecolorColoring **out_end);

/**
 * Walk from `sigma` to `tau` through `2 max_degree + 2` work colors placed
 * above `tau`'s colors.
 *
 * # Safety
 * `g`, `sigma` and `tau` must be live handles; `out` must be writable.
 */
enum RecolorStatus recolor_transform(const struct RecolorGraph *g,
                                     const struct RecolorColoring *sigma,
                                     const struct RecolorColoring *tau,
                                     struct RecolorTrace **out);

/**
 * Trace from a start coloring and `k` moves stored as `(vertex, color)` pairs.
 *
 * # Safety
 * `start` must be a live handle; `moves` must point to `2 * k` values (null
 * allowed when `k == 0`); `out` must be writable.
 */
enum RecolorStatus recolor_trace_new(const struct RecolorColoring *start,
                                     const uint32_t *moves,
                                     size_t k,
                                     struct RecolorTrace **out);

/**
 * Number of moves, or 0 for a null handle.
 *
 * # Safety
 * `t` must be null or a live trace handle.
 */
size_t recolor_trace_len(const struct RecolorTrace *t);

/**
 * Copies the moves as `(vertex, color)` pairs; `buf` needs `2 * len` slots.
 *
 * # Safety
 * `t` must be a live trace handle; `buf` must have room for `cap` values.
 */
enum RecolorStatus recolor_trace_copy(const struct RecolorTrace *t, uint32_t *buf, size_t cap);

/**
 * Checks that every coloring along `t` is proper in `g`. On a fault returns
 * `VerifyFailed` and, when `failing_step` is non-null, stores the index of the
 * offending move there (`SIZE_MAX` for a fault in the start coloring).
 *
 * # Safety
 * `g` and `t` must be live handles; `failing_step` must be null or writable.
 */
enum RecolorStatus recolor_verify(const struct RecolorGraph *g,
                                  const struct RecolorTrace *t,
                                  size_t *failing_step);

/**
 * # Safety
 * `t` must be null or a handle not yet freed.
 */
void recolor_trace_free(struct RecolorTrace *t);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RECOLOR_H */
