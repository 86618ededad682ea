#ifndef GRAPHMUL_H
#define GRAPHMUL_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Passed as `max_rounds` for an unbounded biclique extraction.
 */
#define GM_UNBOUNDED UINT64_MAX

typedef enum GmStatus {
  GM_STATUS_OK = 0,
  GM_STATUS_NULL_POINTER = 1,
  GM_STATUS_INVALID_ARGUMENT = 2,
  GM_STATUS_DIMENSION = 3,
  GM_STATUS_OUT_OF_RANGE = 4,
  GM_STATUS_PARSE = 5,
  GM_STATUS_FORMAT = 6,
  GM_STATUS_CORRUPT = 7,
  GM_STATUS_IO = 8,
  GM_STATUS_PANIC = 9,
} GmStatus;

typedef enum GmDangling {
  GM_DANGLING_UNIFORM = 0,
  GM_DANGLING_DROP = 1,
} GmDangling;

typedef enum GmKernel {
  GM_KERNEL_CSR = 0,
  GM_KERNEL_REF = 1,
  GM_KERNEL_BICLIQUE = 2,
} GmKernel;

/**
 * Opaque biclique cover.
 */
typedef struct GmCover GmCover;

/**
 * Opaque CSR adjacency matrix.
 */
typedef struct GmGraph GmGraph;

/**
 * Opaque reference-differential matrix.
 */
typedef struct GmRefMatrix GmRefMatrix;

typedef struct GmPageRankConfig {
  /**
   * Teleport probability, in (0, 1).
   */
  double alpha;
  size_t iterations;
  /**
   * Early-stop threshold on the L1 change; negative disables it.
   */
  double l1_tolerance;
  enum GmDangling dangling;
} GmPageRankConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failed call on this thread, or null after a
 * successful call. Valid until the next `gm_*` call on the same thread.
 */
const char *gm_last_error_message(void);

/**
 * Builds a graph from `len` edges `(sources[k], targets[k])` on `n` vertices.
 *
 * # Safety
 * `sources` and `targets` must point to `len` readable values; `out` must be writable.
 */
enum GmStatus gm_graph_from_edges(const uint32_t *sources,
                                  const uint32_t *targets,
                                  size_t len,
                                  size_t n,
                                  struct GmGraph **out);

/**
 * Loads a whitespace-separated edge list. `n = 0` infers the vertex count.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum GmStatus gm_graph_load_edge_list(const char *path, size_t n, struct GmGraph **out);

/**
 * # Safety
 * `g` must be null or a handle from this library that was not freed yet.
 */
void gm_graph_free(struct GmGraph *g);

/**
 * # Safety
 * `g` must be null or a live handle.
 */
size_t gm_graph_num_vertices(const struct GmGraph *g);

/**
 * # Safety
 * `g` must be null or a live handle.
 */
size_t gm_graph_num_edges(const struct GmGraph *g);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum GmStatus gm_graph_transpose(const struct GmGraph *g, struct GmGraph **out);

/**
 * `y = A x` with the plain CSR kernel. `adds` may be null.
 *
 * # Safety
 * `x` and `y` must point to `x_len` and `y_len` values.
 */
enum GmStatus gm_graph_matvec(const struct GmGraph *g,
                              const double *x,
                              size_t x_len,
                              double *y,
                              size_t y_len,
                              uint64_t *adds);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum GmStatus gm_ref_compress(const struct GmGraph *g, size_t window, struct GmRefMatrix **out);

/**
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum GmStatus gm_ref_load(const char *path, struct GmRefMatrix **out);

/**
 * # Safety
 * `rm` must be a live handle; `path` a NUL-terminated string.
 */
enum GmStatus gm_ref_save(const struct GmRefMatrix *rm, const char *path);

/**
 * # Safety
 * `rm` must be null or a handle that was not freed yet.
 */
void gm_ref_free(struct GmRefMatrix *rm);

/**
 * # Safety
 * `rm` must be null or a live handle.
 */
size_t gm_ref_num_rows(const struct GmRefMatrix *rm);

/**
 * Nonzeros of the differential matrix.
 *
 * # Safety
 * `rm` must be null or a live handle.
 */
size_t gm_ref_m_prime(const struct GmRefMatrix *rm);

/**
 * `y = A x` from the differential encoding. `adds` may be null.
 *
 * # Safety
 * `x` and `y` must point to `x_len` and `y_len` values.
 */
enum GmStatus gm_ref_matvec(const struct GmRefMatrix *rm,
                            const double *x,
                            size_t x_len,
                            double *y,
                            size_t y_len,
                            uint64_t *adds);

/**
 * Greedy biclique cover of `g`. Pass [`GM_UNBOUNDED`] for no round limit.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum GmStatus gm_cover_extract(const struct GmGraph *g,
                               uint64_t min_gain,
                               uint64_t max_rounds,
                               struct GmCover **out);

/**
 * # Safety
 * `cover` must be null or a handle that was not freed yet.
 */
void gm_cover_free(struct GmCover *cover);

/**
 * # Safety
 * `cover` must be null or a live handle.
 */
uint64_t gm_cover_compressed_size(const struct GmCover *cover);

/**
 * Writes 1 to `valid` iff the cover partitions the edges of `g`.
 *
 * # Safety
 * Handles must be live; `valid` must be writable.
 */
enum GmStatus gm_cover_verify(const struct GmCover *cover, const struct GmGraph *g, bool *valid);

/**
 * `y = A x` from the cover. `adds` may be null.
 *
 * # Safety
 * `x` and `y` must point to `x_len` and `y_len` values.
 */
enum GmStatus gm_cover_matvec(const struct GmCover *cover,
                              const double *x,
                              size_t x_len,
                              double *y,
                              size_t y_len,
                              uint64_t *adds);

struct GmPageRankConfig gm_pagerank_config_default(void);

/**
 * PageRank of `g` using the requested kernel on its transpose. `window` is
 * used by the reference kernel only. Writes `n` ranks and, if
 * `iterations_run` is non-null, the number of iterations performed.
 *
 * # Safety
 * `g` and `config` must be valid; `ranks` must point to `ranks_len` values.
 */
enum GmStatus gm_pagerank(const struct GmGraph *g,
                          const struct GmPageRankConfig *config,
                          enum GmKernel kernel,
                          size_t window,
                          double *ranks,
                          size_t ranks_len,
                          size_t *iterations_run);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRAPHMUL_H */
