#ifndef QFTENT_H
#define QFTENT_H

/* Generated by cbindgen from crates/ffi. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QftentBranch {
  QFTENT_BRANCH_ASCENDING = 0,
  QFTENT_BRANCH_DESCENDING = 1,
} QftentBranch;

/**
 * Result codes returned by every fallible function.
 */
typedef enum QftentStatus {
  QFTENT_STATUS_OK = 0,
  QFTENT_STATUS_NULL_POINTER = 1,
  QFTENT_STATUS_INVALID_ARGUMENT = 2,
  QFTENT_STATUS_DIMENSION_MISMATCH = 3,
  QFTENT_STATUS_BUFFER_TOO_SMALL = 4,
  QFTENT_STATUS_NOT_FOUND = 5,
  QFTENT_STATUS_PANIC = 6,
} QftentStatus;

/**
 * Opaque handle to a normalized state vector.
 */
typedef struct QftentState QftentState;

typedef struct QftentOptimizerConfig {
  /**
   * Restart count; 0 selects `8 + q`.
   */
  uint32_t restarts;
  uint32_t max_sweeps;
  double tol;
  bool pair_step;
  uint64_t seed;
} QftentOptimizerConfig;

typedef struct QftentGroverian {
  double p_max;
  double g;
  uint32_t sweeps_used;
  uint32_t restart_index;
} QftentGroverian;

typedef struct QftentApprox {
  /**
   * Number of terms `A` of the periodic state.
   */
  uint64_t terms;
  double p_accurate;
  double g_accurate;
  double g_simple;
  enum QftentBranch branch;
} QftentApprox;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library defaults: automatic restarts, 200 sweeps, tolerance 1e-10, pair step on.
 */
struct QftentOptimizerConfig qftent_config_default(void);

/**
 * Static description of a status code.
 */
const char *qftent_status_message(enum QftentStatus status);

/**
 * Copies the calling thread's last error message, NUL terminated and
 * truncated to `len` bytes. Returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t qftent_last_error(char *buf, size_t len);

/**
 * Builds a state from `len` real and imaginary parts; `len` must be a power
 * of two. The vector is renormalized.
 *
 * # Safety
 * `re` and `im` must point to `len` readable doubles; `out` must be writable.
 */
enum QftentStatus qftent_state_from_amplitudes(const double *re,
                                               const double *im,
                                               size_t len,
                                               struct QftentState **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum QftentStatus qftent_state_basis(uint32_t q, uint64_t k, struct QftentState **out);

/**
 * Periodic state with period `r` and shift `l` (`l < r <= 2^q`).
 *
 * # Safety
 * `out` must be writable.
 */
enum QftentStatus qftent_state_periodic(uint32_t q,
                                        uint64_t r,
                                        uint64_t l,
                                        struct QftentState **out);

/**
 * Equal superposition of `count` basis indices.
 *
 * # Safety
 * `indices` must point to `count` readable values; `out` must be writable.
 */
enum QftentStatus qftent_state_es(uint32_t q,
                                  const uint64_t *indices,
                                  size_t count,
                                  struct QftentState **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum QftentStatus qftent_state_ghz(uint32_t q, struct QftentState **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum QftentStatus qftent_state_w(uint32_t q, struct QftentState **out);

/**
 * Balanced W state on `2n` qubits.
 *
 * # Safety
 * `out` must be writable.
 */
enum QftentStatus qftent_state_balanced_w(uint32_t n, struct QftentState **out);

/**
 * Haar-random state from a ChaCha8 stream seeded with `seed`.
 *
 * # Safety
 * `out` must be writable.
 */
enum QftentStatus qftent_state_random(uint32_t q, uint64_t seed, struct QftentState **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `state` must come from a `qftent_state_*` constructor and not be used afterwards.
 */
void qftent_state_free(struct QftentState *state);

/**
 * Qubit count, or 0 for a null handle.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
uint32_t qftent_state_qubits(const struct QftentState *state);

/**
 * Copies the amplitudes into `re` and `im`, each of at least `2^q` doubles.
 *
 * # Safety
 * `state` must be a live handle; `re` and `im` must point to `len` writable doubles.
 */
enum QftentStatus qftent_state_amplitudes(const struct QftentState *state,
                                          double *re,
                                          double *im,
                                          size_t len);

/**
 * Applies the QFT (or its inverse) and returns a new handle.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum QftentStatus qftent_qft(const struct QftentState *state,
                             bool inverse,
                             struct QftentState **out);

/**
 * Groverian measure of a state. When `x` and `theta` are non-null they
 * receive the nearest product state's parameters (`len >= q`).
 *
 * # Safety
 * `state` must be a live handle, `config` and `result` valid pointers, and
 * `x`/`theta` null or pointing to `len` writable doubles.
 */
enum QftentStatus qftent_groverian(const struct QftentState *state,
                                   const struct QftentOptimizerConfig *config,
                                   struct QftentGroverian *result,
                                   double *x,
                                   double *theta,
                                   size_t len);

/**
 * `G` before and after the QFT; `delta = after - before`.
 *
 * # Safety
 * `state` must be a live handle; the other pointers must be valid.
 */
enum QftentStatus qftent_delta_g(const struct QftentState *state,
                                 const struct QftentOptimizerConfig *config,
                                 double *g_before,
                                 double *g_after);

/**
 * Approximate entanglement of the periodic state `(q, r, l)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum QftentStatus qftent_approx_periodic(uint32_t q,
                                         uint64_t r,
                                         uint64_t l,
                                         struct QftentApprox *out);

/**
 * Runs the simulated factoring loop. `QFTENT_STATUS_NOT_FOUND` when every
 * attempt failed.
 *
 * # Safety
 * `factor` must be writable.
 */
enum QftentStatus qftent_shor(uint64_t n, uint64_t seed, uint32_t attempts, uint64_t *factor);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QFTENT_H */
