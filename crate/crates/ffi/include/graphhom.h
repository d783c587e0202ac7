#ifndef GRAPHHOM_H
#define GRAPHHOM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GhBlockKind {
  GH_BLOCK_KIND_GC = 0,
  GH_BLOCK_KIND_GC2 = 1,
  GH_BLOCK_KIND_HGC = 2,
  GH_BLOCK_KIND_HGC2 = 3,
  GH_BLOCK_KIND_HGC_TWISTED = 4,
} GhBlockKind;

typedef enum GhStatus {
  GH_STATUS_OK = 0,
  GH_STATUS_NULL_POINTER = 1,
  GH_STATUS_INVALID_UTF8 = 2,
  GH_STATUS_INVALID_ARGUMENT = 3,
  GH_STATUS_PARSE = 4,
  /**
   * The block could not be computed, e.g. it is infinite.
   */
  GH_STATUS_COMPUTE = 5,
  /**
   * Two consecutive differentials did not compose to zero.
   */
  GH_STATUS_SIGN = 6,
  GH_STATUS_OUT_OF_RANGE = 7,
  GH_STATUS_PANIC = 8,
} GhStatus;

/**
 * Parities and shape policy of a complex.
 */
typedef struct GhContext GhContext;

/**
 * A graph in canonical text form.
 */
typedef struct GhGraph GhGraph;

/**
 * A homology table.
 */
typedef struct GhTable GhTable;

/**
 * One homology row. `m` and `h` are meaningful only when the matching
 * `has_` flag is set.
 */
typedef struct GhRow {
  enum GhBlockKind kind;
  int64_t n;
  bool has_m;
  int64_t m;
  size_t g;
  bool has_h;
  size_t h;
  int64_t degree;
  size_t dim;
  bool complete;
} GhRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or an empty string. Valid
 * until the next failing call on the same thread.
 */
const char *gh_last_error(void);

/**
 * Library version as a static string.
 */
const char *gh_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void gh_string_free(char *s);

/**
 * A context for `GC`-type complexes (`has_m = false`) or hairy complexes
 * with source dimension `m`. `min_valence` is 2 or 3.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum GhStatus gh_context_new(int64_t n,
                             bool has_m,
                             int64_t m,
                             uint8_t min_valence,
                             bool allow_tadpoles,
                             struct GhContext **out);

/**
 * # Safety
 * `ctx` must be null or a context from [`gh_context_new`], not yet freed.
 */
void gh_context_free(struct GhContext *ctx);

/**
 * Parses the text form `G l=<l> h=<...> e=<u-v,...>` or `SEG`.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum GhStatus gh_graph_parse(const char *text, struct GhGraph **out);

/**
 * # Safety
 * `g` must be null or a graph from this library, not yet freed.
 */
void gh_graph_free(struct GhGraph *g);

/**
 * # Safety
 * `g` must be a live graph and `out` a valid pointer.
 */
enum GhStatus gh_graph_to_string(const struct GhGraph *g, char **out);

/**
 * Canonical form of `g` in `ctx` and the sign relating the two. A graph
 * that is zero in the complex gives `*sign = 0` and `*out = NULL`.
 *
 * # Safety
 * `g` and `ctx` must be live handles; `out` and `sign` valid pointers.
 */
enum GhStatus gh_graph_canonicalize(const struct GhGraph *g,
                                    const struct GhContext *ctx,
                                    struct GhGraph **out,
                                    int32_t *sign);

/**
 * Number of nonzero canonical generators with `l` internal vertices, `k`
 * internal edges and `h` hairs.
 *
 * # Safety
 * `ctx` must be a live context and `out` a valid pointer.
 */
enum GhStatus gh_enumerate_count(const struct GhContext *ctx,
                                 size_t l,
                                 size_t k,
                                 size_t h,
                                 size_t *out);

/**
 * Homology of the `(g, h)` block of the complex described by `ctx`
 * (`h` is ignored for non-hairy contexts). Bivalent contexts need a degree
 * window (`has_degrees`, `lo..=hi`). With `exact` ranks use rational
 * elimination, otherwise two random primes.
 *
 * # Safety
 * `ctx` must be a live context and `out` a valid pointer.
 */
enum GhStatus gh_block_homology(const struct GhContext *ctx,
                                size_t g,
                                size_t h,
                                bool has_degrees,
                                int64_t lo,
                                int64_t hi,
                                bool exact,
                                struct GhTable **out);

/**
 * Loop order `g` of a trivalent `HGC_{n-1,n}` twisted by the tripod series
 * with parameter `lambda_num / lambda_den`, hairs `1..=h_max`.
 *
 * # Safety
 * `ctx` must be a live context and `out` a valid pointer.
 */
enum GhStatus gh_tripod_twisted_homology(const struct GhContext *ctx,
                                         size_t g,
                                         size_t h_max,
                                         int64_t lambda_num,
                                         int64_t lambda_den,
                                         bool has_degrees,
                                         int64_t lo,
                                         int64_t hi,
                                         struct GhTable **out);

/**
 * # Safety
 * `t` must be null or a table from this library, not yet freed.
 */
void gh_table_free(struct GhTable *t);

/**
 * # Safety
 * `t` must be a live table and `out` a valid pointer.
 */
enum GhStatus gh_table_len(const struct GhTable *t, size_t *out);

/**
 * # Safety
 * `t` must be a live table and `out` a valid pointer.
 */
enum GhStatus gh_table_row(const struct GhTable *t, size_t i, struct GhRow *out);

/**
 * The table as CSV with a header line.
 *
 * # Safety
 * `t` must be a live table and `out` a valid pointer.
 */
enum GhStatus gh_table_to_csv(const struct GhTable *t, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRAPHHOM_H */
