#ifndef CHSH_TRADEOFF_H
#define CHSH_TRADEOFF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CtStatus {
  CT_OK = 0,
  CT_NULL_POINTER = 1,
  /**
   * A parameter lies outside its documented range.
   */
  CT_INVALID_ARGUMENT = 2,
  /**
   * Wrong qubit count, buffer length or qubit label.
   */
  CT_DIMENSION = 3,
  /**
   * Zero vector or similar input with no meaningful result.
   */
  CT_DEGENERATE = 4,
  CT_NUMERICAL = 5,
  /**
   * Malformed JSON or a non-UTF-8 string.
   */
  CT_PARSE = 6,
  CT_PANIC = 99,
} CtStatus;

typedef enum CtSloccTag {
  CT_PRODUCT_ABC = 0,
  CT_BISEPARABLE_A = 1,
  CT_BISEPARABLE_B = 2,
  CT_BISEPARABLE_C = 3,
  CT_W = 4,
  CT_GHZ = 5,
  CT_AMBIGUOUS = 6,
} CtSloccTag;

/**
 * Opaque pure-state handle.
 */
typedef struct CtState CtState;

/**
 * Squared maximal CHSH values of the three pair reductions and their sum.
 */
typedef struct CtTradeoff {
  double s_ab;
  double s_ac;
  double s_bc;
  double total;
} CtTradeoff;

typedef struct CtClassification {
  enum CtSloccTag tag;
  uint8_t ranks[3];
  double tangle;
} CtClassification;

typedef struct CtSearchResult {
  double best_total;
  double sampled_best;
  bool violation_found;
} CtSearchResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or an empty string.
 * The pointer stays valid until the next library call on the same thread.
 */
const char *ct_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ct_version(void);

/**
 * Builds an `n`-qubit state from `len = 2 * 2^n` interleaved doubles
 * `re0, im0, re1, im1, ...`. The vector is normalized.
 *
 * # Safety
 * `amplitudes` must point to `len` readable doubles; `out` must be writable.
 */
enum CtStatus ct_state_new(size_t n, const double *amplitudes, size_t len, struct CtState **out);

/**
 * Haar-random `n`-qubit state, deterministic in `(n, seed)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CtStatus ct_state_haar(size_t n, uint64_t seed, struct CtState **out);

/**
 * Parses a JSON state document `{"n": .., "amplitudes": [[re, im], ..]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum CtStatus ct_state_from_json(const char *json, struct CtState **out);

/**
 * Serializes a state as JSON. Free the result with [`ct_string_free`].
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum CtStatus ct_state_to_json(const struct CtState *state, char **out);

/**
 * Releases a state handle. Null is ignored.
 *
 * # Safety
 * `state` must be null or a handle not yet freed.
 */
void ct_state_free(struct CtState *state);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void ct_string_free(char *s);

/**
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum CtStatus ct_state_n_qubits(const struct CtState *state, size_t *out);

/**
 * Copies the amplitudes as interleaved `re, im` doubles into `buf`, which
 * must hold `len >= 2 * 2^n` entries.
 *
 * # Safety
 * `state` must be a live handle; `buf` must point to `len` writable doubles.
 */
enum CtStatus ct_state_amplitudes(const struct CtState *state, double *buf, size_t len);

/**
 * `|000⟩`
 *
 * # Safety
 * `out` must be writable.
 */
enum CtStatus ct_make_product(struct CtState **out);

/**
 * Biseparable state with the unentangled qubit `free_qubit` (0 = A, 1 = B,
 * 2 = C) and `delta` in `(0, π/4]`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CtStatus ct_make_biseparable(uint32_t free_qubit, double delta, struct CtState **out);

/**
 * W-class state with weights `a, b, c > 0`, `a + b + c <= 1`.
 *
 * # Safety
 * `out` must be writable.
 */
enum CtStatus ct_make_w(double a, double b, double c, struct CtState **out);

/**
 * GHZ-class state; angles in radians.
 *
 * # Safety
 * `out` must be writable.
 */
enum CtStatus ct_make_ghz(double delta,
                          double alpha,
                          double beta,
                          double gamma,
                          double phi,
                          struct CtState **out);

/**
 * Maximal CHSH value of the reduction of `state` to qubits `x` and `y`.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum CtStatus ct_max_chsh_pair(const struct CtState *state, size_t x, size_t y, double *out);

/**
 * Squared pair values and their sum for a three-qubit state.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum CtStatus ct_tradeoff_sum(const struct CtState *state, struct CtTradeoff *out);

/**
 * Sum of `tr(MᵀM)` over the three pairs of a three-qubit state.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum CtStatus ct_trace_identity(const struct CtState *state, double *out);

/**
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum CtStatus ct_classify(const struct CtState *state, struct CtClassification *out);

/**
 * `Σ_{Y ≠ anchor} tr(T_{anchor,Y} T_{anchor,Y}ᵀ)` for `n >= 3`.
 *
 * # Safety
 * `state` must be a live handle; `out` must be writable.
 */
enum CtStatus ct_conjecture_sum(const struct CtState *state, size_t anchor, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum CtStatus ct_closed_form_biseparable(double delta, struct CtTradeoff *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum CtStatus ct_closed_form_w(double a, double b, double c, struct CtTradeoff *out);

/**
 * GHZ-family closed forms and `f(a, b, c)`. `f_out` may be null.
 *
 * # Safety
 * `out` must be writable; `f_out` must be null or writable.
 */
enum CtStatus ct_closed_form_ghz(double delta,
                                 double alpha,
                                 double beta,
                                 double gamma,
                                 struct CtTradeoff *out,
                                 double *f_out);

/**
 * Haar sampling plus ascent for the anchored pair sum. `best_state` may be
 * null; otherwise it receives a new handle for the best state found.
 *
 * # Safety
 * `out` must be writable; `best_state` must be null or writable.
 */
enum CtStatus ct_search(size_t n,
                        size_t samples,
                        size_t restarts,
                        uint64_t seed,
                        size_t anchor,
                        struct CtSearchResult *out,
                        struct CtState **best_state);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHSH_TRADEOFF_H */
