#ifndef PLANELOC_H
#define PLANELOC_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PlLocationKind {
  PL_LOCATION_KIND_OUTER = 0,
  /**
   * `id` is a bounded face name, stable until the face is split.
   */
  PL_LOCATION_KIND_FACE = 1,
  /**
   * `id` is an edge id.
   */
  PL_LOCATION_KIND_EDGE = 2,
  /**
   * `id` is a vertex id.
   */
  PL_LOCATION_KIND_VERTEX = 3,
} PlLocationKind;

/**
 * Outcome of every call.
 */
typedef enum PlStatus {
  PL_STATUS_OK = 0,
  PL_STATUS_NULL_POINTER = 1,
  PL_STATUS_ZERO_DENOMINATOR = 2,
  PL_STATUS_DEGENERATE_EDGE = 3,
  PL_STATUS_DUPLICATE_VERTEX = 4,
  /**
   * The edge crosses or overlaps an existing edge, or passes through a vertex.
   */
  PL_STATUS_INVALID_EDGE = 5,
  /**
   * The call panicked; the handle must be freed and not used again.
   */
  PL_STATUS_INTERNAL = 6,
} PlStatus;

/**
 * Opaque locator handle.
 */
typedef struct PlLocator PlLocator;

/**
 * An exact rational `num / den`.
 */
typedef struct PlCoord {
  int64_t num;
  int64_t den;
} PlCoord;

typedef struct PlPoint {
  struct PlCoord x;
  struct PlCoord y;
} PlPoint;

typedef struct PlLocation {
  enum PlLocationKind kind;
  uint32_t id;
} PlLocation;

typedef struct PlStats {
  uint64_t vertices;
  uint64_t edges;
  uint64_t trapezoids;
  uint32_t merges_max_per_edge;
  uint64_t backbone_nodes;
} PlStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates an empty locator. `expected_edges` sizes internal blocks (0 picks
 * a default); nonzero `cascading` selects fractional cascading for list
 * searches; nonzero `validate` checks each edge against all existing ones.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle pointer.
 */
enum PlStatus pl_locator_new(size_t expected_edges,
                             uint8_t cascading,
                             uint8_t validate,
                             struct PlLocator **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `h` must be null or a handle from `pl_locator_new` not yet freed.
 */
void pl_locator_free(struct PlLocator *h);

/**
 * Inserts the edge `a`-`b`, creating missing endpoints. The new edge id is
 * written to `out_edge` when it is not null.
 *
 * # Safety
 * `h` must be a live handle; `out_edge` must be null or writable.
 */
enum PlStatus pl_insert_edge(struct PlLocator *h,
                             struct PlPoint a,
                             struct PlPoint b,
                             uint32_t *out_edge);

/**
 * Inserts a vertex inside a face or on an edge, splitting that edge. The
 * vertex id is written to `out_vertex` when it is not null.
 *
 * # Safety
 * `h` must be a live handle; `out_vertex` must be null or writable.
 */
enum PlStatus pl_insert_vertex(struct PlLocator *h, struct PlPoint p, uint32_t *out_vertex);

/**
 * Locates `q`.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum PlStatus pl_locate(const struct PlLocator *h, struct PlPoint q, struct PlLocation *out);

/**
 * Structure counters.
 *
 * # Safety
 * `h` must be a live handle and `out` writable.
 */
enum PlStatus pl_stats(const struct PlLocator *h, struct PlStats *out);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *pl_last_error(void);

/**
 * Static name of a status code.
 */
const char *pl_status_name(enum PlStatus s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLANELOC_H */
