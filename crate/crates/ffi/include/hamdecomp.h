#ifndef HAMDECOMP_H
#define HAMDECOMP_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum HdStatus {
  HD_STATUS_OK = 0,
  HD_STATUS_NULL_POINTER = 1,
  HD_STATUS_INVALID_ARGUMENT = 2,
  HD_STATUS_PARSE_ERROR = 3,
  /**
   * The input violates a precondition such as regularity or the multiplicity bound.
   */
  HD_STATUS_PRECONDITION = 4,
  /**
   * A check ran to completion and rejected its input.
   */
  HD_STATUS_REJECTED = 5,
  /**
   * Exhaustive search proved that no decomposition exists.
   */
  HD_STATUS_NONEXISTENT = 6,
  /**
   * Search budgets ran out before an answer was found.
   */
  HD_STATUS_INDETERMINATE = 7,
  /**
   * The pipeline failed with the fallback disabled.
   */
  HD_STATUS_FAILED = 8,
  HD_STATUS_PANIC = 9,
} HdStatus;

/**
 * Outcome of a decomposition run, including the replay report.
 */
typedef struct HdDecomposition HdDecomposition;

/**
 * An immutable graph or digraph.
 */
typedef struct HdGraph HdGraph;

/**
 * Pipeline settings. Obtain defaults from [`hd_config_default`].
 */
typedef struct HdConfig {
  /**
   * Multiplicity bound and number of split parts.
   */
  uint32_t r;
  uint64_t seed;
  double nu;
  double tau;
  uint32_t max_retries;
  /**
   * Fall back to exact search when the pipeline fails.
   */
  bool exact_fallback;
} HdConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *hd_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void hd_string_free(char *s);

/**
 * Parses the plain-text edge-list format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum HdStatus hd_graph_parse(const char *text, struct HdGraph **out);

/**
 * Builds a graph from `len` edge copies `(tails[i], heads[i])`. Undirected
 * edges are unordered; repeated entries add multiplicity.
 *
 * # Safety
 * `tails` and `heads` must point to `len` readable elements each (or be
 * anything when `len` is 0); `out` must be writable.
 */
enum HdStatus hd_graph_from_edges(size_t n,
                                  bool directed,
                                  const size_t *tails,
                                  const size_t *heads,
                                  size_t len,
                                  struct HdGraph **out);

/**
 * # Safety
 * `g` must come from this library and must not be used afterwards.
 */
void hd_graph_free(struct HdGraph *g);

/**
 * Vertex count, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live graph handle.
 */
size_t hd_graph_n(const struct HdGraph *g);

/**
 * # Safety
 * `g` must be NULL or a live graph handle.
 */
bool hd_graph_is_directed(const struct HdGraph *g);

/**
 * Writes the edge-list text; release it with [`hd_string_free`].
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum HdStatus hd_graph_to_text(const struct HdGraph *g, char **out);

/**
 * Certifies robust (`nu`, `tau`)-(out)expansion of a simple graph. With
 * `exact` false, `samples` random sets drawn from `seed` are tested.
 * Returns `HD_STATUS_OK` on a pass and `HD_STATUS_REJECTED` on a failure;
 * the certificate JSON, witness included, goes to `certificate_json` when
 * it is not NULL.
 *
 * # Safety
 * `g` must be a live graph handle; `certificate_json` must be NULL or writable.
 */
enum HdStatus hd_check_expander(const struct HdGraph *g,
                                double nu,
                                double tau,
                                bool exact,
                                size_t samples,
                                uint64_t seed,
                                char **certificate_json);

struct HdConfig hd_config_default(void);

/**
 * Runs the decomposition pipeline. `config` may be NULL for defaults.
 *
 * A handle is written to `out` whenever the run completes, whatever its
 * outcome; the status then reports the outcome (`HD_STATUS_OK` for a
 * verified decomposition). On argument or precondition errors `out` is
 * left untouched.
 *
 * # Safety
 * `g` must be a live graph handle; `config` NULL or readable; `out` writable.
 */
enum HdStatus hd_decompose(const struct HdGraph *g,
                           const struct HdConfig *config,
                           struct HdDecomposition **out);

/**
 * # Safety
 * `d` must come from this library and must not be used afterwards.
 */
void hd_decomposition_free(struct HdDecomposition *d);

/**
 * Number of Hamilton cycles; 0 when the run produced none.
 *
 * # Safety
 * `d` must be NULL or a live decomposition handle.
 */
size_t hd_decomposition_cycle_count(const struct HdDecomposition *d);

/**
 * Copies cycle `index` into `buf`, which must hold `hd_graph_n` entries.
 *
 * # Safety
 * `d` must be a live decomposition handle; `buf` must point to `cap`
 * writable elements.
 */
enum HdStatus hd_decomposition_cycle(const struct HdDecomposition *d,
                                     size_t index,
                                     size_t *buf,
                                     size_t cap);

/**
 * The full run report as JSON; release it with [`hd_string_free`].
 *
 * # Safety
 * `d` must be a live decomposition handle; `out` must be writable.
 */
enum HdStatus hd_decomposition_report_json(const struct HdDecomposition *d, char **out);

/**
 * Independently re-checks `d` against `g`. `HD_STATUS_OK` means accepted,
 * `HD_STATUS_REJECTED` names the first violation in [`hd_last_error`].
 * A run without cycles is rejected.
 *
 * # Safety
 * `g` and `d` must be live handles.
 */
enum HdStatus hd_verify(const struct HdGraph *g, const struct HdDecomposition *d);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HAMDECOMP_H */
