#ifndef CTOQW_H
#define CTOQW_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every exported function.
 */
typedef enum CtoqwStatus {
  CTOQW_STATUS_OK = 0,
  CTOQW_STATUS_NULL_POINTER = 1,
  CTOQW_STATUS_INVALID_ARGUMENT = 2,
  CTOQW_STATUS_PARSE = 3,
  CTOQW_STATUS_NUMERICAL = 4,
  CTOQW_STATUS_BUFFER_TOO_SMALL = 5,
  CTOQW_STATUS_PANIC = 6,
} CtoqwStatus;

typedef enum CtoqwFamily {
  CTOQW_FAMILY_CYCLE = 0,
  CTOQW_FAMILY_PATH = 1,
  CTOQW_FAMILY_STAR = 2,
  CTOQW_FAMILY_COMPLETE = 3,
} CtoqwFamily;

typedef enum CtoqwClassification {
  CTOQW_CLASSIFICATION_MAXIMALLY_MIXED = 0,
  CTOQW_CLASSIFICATION_COHERENT_LIMIT = 1,
  CTOQW_CLASSIFICATION_NON_UNIQUE = 2,
} CtoqwClassification;

typedef enum CtoqwMethod {
  /**
   * Dense matrix exponential.
   */
  CTOQW_METHOD_EXPM = 0,
  /**
   * Adaptive Dormand-Prince integration.
   */
  CTOQW_METHOD_RK = 1,
} CtoqwMethod;

/**
 * Opaque graph handle.
 */
typedef struct CtoqwGraph CtoqwGraph;

/**
 * Opaque generator handle; keeps a copy of its graph.
 */
typedef struct CtoqwLiouvillian CtoqwLiouvillian;

typedef struct CtoqwGraphClass {
  bool connected;
  bool regular;
  bool doubly_stochastic_m;
  size_t components;
} CtoqwGraphClass;

/**
 * Summary of a steady-state solve. Fields that need a unique steady state
 * are NaN when `unique` is false.
 */
typedef struct CtoqwSteadySummary {
  size_t dim;
  size_t kernel_dim;
  bool unique;
  bool positive_definite;
  double min_eigenvalue;
  double residual;
  double distance_to_mixed;
  enum CtoqwClassification classification;
  /**
   * False when the solution contradicts the structural expectations.
   */
  bool consistent;
} CtoqwSteadySummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ctoqw_version(void);

/**
 * Message describing the last failure on this thread; empty after a
 * success. The pointer stays valid until the next call on this thread.
 */
const char *ctoqw_last_error_message(void);

/**
 * Builds a standard graph. Star graphs take the number of edges as
 * `size` and put the hub at vertex 0.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum CtoqwStatus ctoqw_graph_generate(enum CtoqwFamily family,
                                      size_t size,
                                      struct CtoqwGraph **out);

/**
 * Builds a graph on `n` vertices from `edge_count` pairs stored flat in
 * `edges` (`2 * edge_count` entries).
 *
 * # Safety
 * `edges` must point to `2 * edge_count` readable values; `out` must be writable.
 */
enum CtoqwStatus ctoqw_graph_from_edges(size_t n,
                                        const size_t *edges,
                                        size_t edge_count,
                                        struct CtoqwGraph **out);

/**
 * Parses the edge-list text format (`j k` per line, optional `n <count>`
 * header, `#` comments).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum CtoqwStatus ctoqw_graph_parse(const char *text, struct CtoqwGraph **out);

/**
 * Releases a graph handle. Null is ignored.
 *
 * # Safety
 * `g` must come from this library and not be used afterwards.
 */
void ctoqw_graph_free(struct CtoqwGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum CtoqwStatus ctoqw_graph_vertex_count(const struct CtoqwGraph *g, size_t *out);

/**
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum CtoqwStatus ctoqw_graph_edge_count(const struct CtoqwGraph *g, size_t *out);

/**
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum CtoqwStatus ctoqw_graph_classify(const struct CtoqwGraph *g, struct CtoqwGraphClass *out);

/**
 * Dimension of the commutant of the graph's jump operators.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum CtoqwStatus ctoqw_commutant_dimension(const struct CtoqwGraph *g, size_t *out);

/**
 * Builds the open-walk generator of a graph. Fails on isolated vertices.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum CtoqwStatus ctoqw_liouvillian_build(const struct CtoqwGraph *g, struct CtoqwLiouvillian **out);

/**
 * Releases a generator handle. Null is ignored.
 *
 * # Safety
 * `l` must come from this library and not be used afterwards.
 */
void ctoqw_liouvillian_free(struct CtoqwLiouvillian *l);

/**
 * Number of vertices `n`; density matrices have `n * n` entries.
 *
 * # Safety
 * `l` must be a live generator handle; `out` must be writable.
 */
enum CtoqwStatus ctoqw_liouvillian_dim(const struct CtoqwLiouvillian *l, size_t *out);

/**
 * Solves for the steady state with default tolerances.
 *
 * The summary is always written. When the steady state is unique it is
 * also written row-major into `re` and `im`, each of length `len >= n * n`;
 * pass `len = 0` to request only the summary.
 *
 * # Safety
 * `l` must be a live generator handle; `summary` must be writable; `re`
 * and `im` must each hold `len` writable doubles.
 */
enum CtoqwStatus ctoqw_steady_state(const struct CtoqwLiouvillian *l,
                                    double *re,
                                    double *im,
                                    size_t len,
                                    struct CtoqwSteadySummary *summary);

/**
 * Evolves the density matrix given row-major in `rho_re`/`rho_im`
 * (`n * n` entries each) to each of the `n_times` ascending, non-negative
 * `times`. State `i` is written row-major at offset `i * n * n` of
 * `out_re`/`out_im`, which need `out_len >= n_times * n * n` entries.
 *
 * # Safety
 * All pointers must reference buffers of the stated lengths.
 */
enum CtoqwStatus ctoqw_evolve(const struct CtoqwLiouvillian *l,
                              const double *rho_re,
                              const double *rho_im,
                              const double *times,
                              size_t n_times,
                              enum CtoqwMethod method,
                              double *out_re,
                              double *out_im,
                              size_t out_len);

/**
 * Long-time average site distribution of the unitary walk started at
 * `vertex`, written into `out` (`len >= n`).
 *
 * # Safety
 * `g` must be a live graph handle; `out` must hold `len` writable doubles.
 */
enum CtoqwStatus ctoqw_ctqw_limiting_average(const struct CtoqwGraph *g,
                                             size_t vertex,
                                             double *out,
                                             size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CTOQW_H */
