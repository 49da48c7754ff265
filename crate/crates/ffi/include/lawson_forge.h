#ifndef LAWSON_FORGE_H
#define LAWSON_FORGE_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LfStatus {
  LF_STATUS_OK = 0,
  LF_STATUS_NULL_POINTER = 1,
  LF_STATUS_INVALID_INPUT = 2,
  /**
   * The quad equations have no admissible solution.
   */
  LF_STATUS_NON_SOLVABLE = 3,
  /**
   * Spectral or edge degeneracy (α or β vanishes, β(1) = 0, ...).
   */
  LF_STATUS_DEGENERATE = 4,
  /**
   * A geometric precondition failed.
   */
  LF_STATUS_GEOMETRY = 5,
  LF_STATUS_BUFFER_TOO_SMALL = 6,
  LF_STATUS_PANIC = 7,
} LfStatus;

/**
 * Propagated Lax data on a window.
 */
typedef struct LfLattice LfLattice;

/**
 * An immersed net with the lattice it came from.
 */
typedef struct LfNet LfNet;

/**
 * Horizontal edge data `(a, u)`.
 */
typedef struct LfUEdge {
  double a_re;
  double a_im;
  double u;
} LfUEdge;

/**
 * Vertical edge data `(b, v)`.
 */
typedef struct LfVEdge {
  double b_re;
  double b_im;
  double v;
} LfVEdge;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *lf_last_error(void);

/**
 * Opposite edges of one quad from its lower and left edges.
 *
 * # Safety
 * All pointers must be valid (inputs readable, outputs writable).
 */
enum LfStatus lf_solve_quad(const struct LfUEdge *u,
                            const struct LfVEdge *v,
                            struct LfUEdge *up_out,
                            struct LfVEdge *vp_out);

/**
 * Propagate Cauchy data on the bottom row (`width - 1` edges) and left
 * column (`height - 1` edges) over the whole window.
 *
 * # Safety
 * `row0`/`col0` must hold `n_row0`/`n_col0` elements; `out` must be writable.
 */
enum LfStatus lf_lattice_propagate(const struct LfUEdge *row0,
                                   size_t n_row0,
                                   const struct LfVEdge *col0,
                                   size_t n_col0,
                                   struct LfLattice **out);

/**
 * Propagate seeded random Cauchy data with the default sampling ranges.
 *
 * # Safety
 * `out` must be writable.
 */
enum LfStatus lf_lattice_random(size_t width, size_t height, uint64_t seed, struct LfLattice **out);

/**
 * # Safety
 * `lattice` must come from this library and not be freed twice; null is ignored.
 */
void lf_lattice_free(struct LfLattice *lattice);

/**
 * Window width, or 0 for null.
 *
 * # Safety
 * `lattice` must be null or a live handle.
 */
size_t lf_lattice_width(const struct LfLattice *lattice);

/**
 * # Safety
 * `lattice` must be null or a live handle.
 */
size_t lf_lattice_height(const struct LfLattice *lattice);

/**
 * Data on the horizontal edge (m, n) → (m + 1, n).
 *
 * # Safety
 * `lattice` must be a live handle, `out` writable.
 */
enum LfStatus lf_lattice_u_edge(const struct LfLattice *lattice,
                                size_t m,
                                size_t n,
                                struct LfUEdge *out);

/**
 * Data on the vertical edge (m, n) → (m, n + 1).
 *
 * # Safety
 * `lattice` must be a live handle, `out` writable.
 */
enum LfStatus lf_lattice_v_edge(const struct LfLattice *lattice,
                                size_t m,
                                size_t n,
                                struct LfVEdge *out);

/**
 * CMC-1 net in R³ (γ = 0).
 *
 * # Safety
 * `lattice` must be a live handle, `out` writable.
 */
enum LfStatus lf_immerse_r3(const struct LfLattice *lattice, struct LfNet **out);

/**
 * Net in S³ at spectral angle `gamma1` ∈ (0, π/2); minimal at π/4.
 *
 * # Safety
 * `lattice` must be a live handle, `out` writable.
 */
enum LfStatus lf_immerse_s3(const struct LfLattice *lattice, double gamma1, struct LfNet **out);

/**
 * # Safety
 * `net` must come from this library and not be freed twice; null is ignored.
 */
void lf_net_free(struct LfNet *net);

/**
 * Coordinates per vertex: 3 for R³ nets, 4 for S³ nets; 0 for null.
 *
 * # Safety
 * `net` must be null or a live handle.
 */
size_t lf_net_dimension(const struct LfNet *net);

/**
 * Number of vertices, `width · height`; 0 for null.
 *
 * # Safety
 * `net` must be null or a live handle.
 */
size_t lf_net_vertex_count(const struct LfNet *net);

/**
 * Copy vertices row-major over (m, n) into `buf` (`dimension · count` doubles).
 *
 * # Safety
 * `net` must be a live handle and `buf` writable for `len` doubles.
 */
enum LfStatus lf_net_vertices(const struct LfNet *net, double *buf, size_t len);

/**
 * Copy the Gauss map, laid out like the vertices.
 *
 * # Safety
 * `net` must be a live handle and `buf` writable for `len` doubles.
 */
enum LfStatus lf_net_normals(const struct LfNet *net, double *buf, size_t len);

/**
 * Run every invariant check; `*passed` is 1 if all pass, else 0.
 *
 * # Safety
 * `net` must be a live handle, `passed` writable.
 */
enum LfStatus lf_net_verify(const struct LfNet *net, int32_t *passed);

/**
 * Serialize the net (with its Lax data) in the native JSON format. Free
 * the string with [`lf_string_free`].
 *
 * # Safety
 * `net` must be a live handle, `out` writable.
 */
enum LfStatus lf_net_to_json(const struct LfNet *net, char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice; null is ignored.
 */
void lf_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LAWSON_FORGE_H */
