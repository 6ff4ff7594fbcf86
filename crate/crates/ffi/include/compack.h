#ifndef COMPACK_H
#define COMPACK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  COMPACK_GAMMA_OUTCOME_FOUND = 0,
  COMPACK_GAMMA_OUTCOME_EXHAUSTED_NONE = 1,
  COMPACK_GAMMA_OUTCOME_BUDGET_EXCEEDED = 2,
} CompackGammaOutcome;

typedef enum {
  COMPACK_INTERCEPT_STATUS_FOUND = 0,
  COMPACK_INTERCEPT_STATUS_NONE = 1,
  COMPACK_INTERCEPT_STATUS_AMBIGUOUS = 2,
} CompackInterceptStatus;

typedef enum {
  COMPACK_STATUS_OK = 0,
  COMPACK_STATUS_NULL_POINTER = 1,
  COMPACK_STATUS_INVALID_UTF8 = 2,
  COMPACK_STATUS_DOMAIN = 3,
  COMPACK_STATUS_PRECONDITION = 4,
  COMPACK_STATUS_USAGE = 5,
  COMPACK_STATUS_RESOURCE = 6,
  COMPACK_STATUS_SOLVER = 7,
  COMPACK_STATUS_VERIFICATION = 8,
  COMPACK_STATUS_PARSE = 9,
  COMPACK_STATUS_IO = 10,
  COMPACK_STATUS_BUFFER_TOO_SMALL = 11,
  COMPACK_STATUS_PANIC = 12,
} CompackStatus;

/**
 * Result of a gamma search.
 */
typedef struct CompackGammaResult CompackGammaResult;

/**
 * A finite packing.
 */
typedef struct CompackPacking CompackPacking;

typedef struct {
  size_t circles;
  size_t violations;
  size_t tangencies;
  size_t interior;
  size_t interior_compact;
  double worst_residual;
} CompackVerifyReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Valid until the next failing call.
 */
const char *compack_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void compack_string_free(char *s);

/**
 * Write the small-circle angle-counts as consecutive 6-tuples into `out`.
 *
 * `count` receives the number of tuples. With `out` NULL only the count is written.
 *
 * # Safety
 * `out` must hold `capacity * 6` values when not NULL.
 */
CompackStatus compack_enumerate_s(uint32_t *out, size_t capacity, size_t *count);

/**
 * Number of candidate pairs; `scope` is "full" or "capped".
 *
 * # Safety
 * `scope` must be a NUL-terminated string and `count` writable.
 */
CompackStatus compack_enumerate_k_count(const char *scope, size_t *count);

/**
 * Intercept of a pair. `r` and `s` receive decimal strings, or NULL when there is no point.
 *
 * # Safety
 * `eta` and `zeta` must point to 6 values; the out pointers must be writable.
 */
CompackStatus compack_intercept(const uint32_t *eta,
                                const uint32_t *zeta,
                                uint32_t digits,
                                CompackInterceptStatus *status,
                                char **r,
                                char **s);

/**
 * Large-circle angle-counts at `(r, s)` with the default tolerance.
 * A `budget` of 0 selects the default node budget.
 *
 * # Safety
 * `r` and `s` must be NUL-terminated decimals; `out` must be writable.
 */
CompackStatus compack_gamma_search(const char *r,
                                   const char *s,
                                   uint32_t digits,
                                   uint64_t budget,
                                   CompackGammaResult **out);

/**
 * # Safety
 * `h` must be a live handle.
 */
CompackGammaOutcome compack_gamma_outcome(const CompackGammaResult *h);

/**
 * # Safety
 * `h` must be a live handle.
 */
uint64_t compack_gamma_nodes(const CompackGammaResult *h);

/**
 * # Safety
 * `h` must be a live handle.
 */
size_t compack_gamma_count(const CompackGammaResult *h);

/**
 * Copy solution `i` into `xi`.
 *
 * # Safety
 * `h` must be a live handle and `xi` hold 6 values.
 */
CompackStatus compack_gamma_get(const CompackGammaResult *h, size_t i, uint32_t *xi);

/**
 * # Safety
 * `h` must come from [`compack_gamma_search`] and not have been freed.
 */
void compack_gamma_free(CompackGammaResult *h);

/**
 * Parse a packing from its JSON form.
 *
 * # Safety
 * `json` must be NUL-terminated; `out` must be writable.
 */
CompackStatus compack_packing_from_json(const char *json, uint32_t digits, CompackPacking **out);

/**
 * Grow a patch for a pair whose intercept exists, seeded with a small-circle corona.
 * `stalled` is set to 1 when growth stopped before covering the region.
 *
 * # Safety
 * `eta` and `zeta` must point to 6 values; the out pointers must be writable.
 */
CompackStatus compack_grow(const uint32_t *eta,
                           const uint32_t *zeta,
                           uint32_t digits,
                           double half,
                           CompackPacking **out,
                           int32_t *stalled);

/**
 * # Safety
 * `p` must be a live handle.
 */
size_t compack_packing_len(const CompackPacking *p);

/**
 * JSON form with `digits` significant digits, released with [`compack_string_free`].
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
CompackStatus compack_packing_to_json(const CompackPacking *p, uint32_t digits, char **out);

/**
 * SVG document, released with [`compack_string_free`].
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
CompackStatus compack_packing_render_svg(const CompackPacking *p,
                                         double scale,
                                         int32_t tangency,
                                         char **out);

/**
 * Overlap and compactness check at tolerance `tol`.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
CompackStatus compack_packing_verify(const CompackPacking *p, double tol, CompackVerifyReport *out);

/**
 * # Safety
 * `p` must come from this library and not have been freed.
 */
void compack_packing_free(CompackPacking *p);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COMPACK_H */
