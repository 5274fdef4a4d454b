#ifndef KCOLOR_H
#define KCOLOR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KcStatus {
  KC_STATUS_OK = 0,
  KC_STATUS_NULL_POINTER = 1,
  KC_STATUS_INVALID_UTF8 = 2,
  KC_STATUS_PARSE = 3,
  KC_STATUS_GEOMETRY = 4,
  KC_STATUS_INVALID_INPUT = 5,
  KC_STATUS_TOO_LARGE = 6,
  KC_STATUS_IO = 7,
  KC_STATUS_INVARIANT = 8,
  KC_STATUS_PANIC = 9,
} KcStatus;

/**
 * Which exact quantity of a bound report to read.
 */
typedef enum KcQuantity {
  KC_QUANTITY_ALPHA = 0,
  KC_QUANTITY_BETA = 1,
  KC_QUANTITY_GAMMA = 2,
  KC_QUANTITY_DELTA = 3,
  KC_QUANTITY_CONSTANT = 4,
  KC_QUANTITY_BOUND = 5,
  KC_QUANTITY_BOOK_BOUND = 6,
  KC_QUANTITY_LOWER_BOUND = 7,
} KcQuantity;

/**
 * The result of a bound computation.
 */
typedef struct KcBound KcBound;

/**
 * A validated instance.
 */
typedef struct KcInstance KcInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and validates an instance from NUL-terminated text.
 *
 * # Safety
 * `text` must be a valid C string and `out` a valid pointer.
 */
enum KcStatus kc_instance_from_str(const char *text, struct KcInstance **out);

/**
 * Reads, parses and validates an instance file.
 *
 * # Safety
 * `path` must be a valid C string and `out` a valid pointer.
 */
enum KcStatus kc_instance_from_path(const char *path, struct KcInstance **out);

/**
 * # Safety
 * `inst` must be null or a handle from `kc_instance_from_*` not yet freed.
 */
void kc_instance_free(struct KcInstance *inst);

/**
 * Number of points and colors.
 *
 * # Safety
 * `inst` must be a live handle; `n` and `k` valid pointers.
 */
enum KcStatus kc_instance_size(const struct KcInstance *inst, size_t *n, uint32_t *k);

/**
 * Total and monochromatic crossings.
 *
 * # Safety
 * `inst` must be a live handle; `total` and `monochromatic` valid pointers.
 */
enum KcStatus kc_count(const struct KcInstance *inst, uint64_t *total, uint64_t *monochromatic);

/**
 * Computes the asymptotic coefficients and bound, with the optimal matching
 * or (when `use_given_matching`) the instance's own matching and details.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer.
 */
enum KcStatus kc_bound(const struct KcInstance *inst,
                       bool use_given_matching,
                       struct KcBound **out);

/**
 * # Safety
 * `bound` must be null or a handle from `kc_bound` not yet freed.
 */
void kc_bound_free(struct KcBound *bound);

/**
 * Nearest `double` to a quantity.
 *
 * # Safety
 * `bound` must be a live handle and `out` a valid pointer.
 */
enum KcStatus kc_bound_value(const struct KcBound *bound, enum KcQuantity which, double *out);

/**
 * A quantity as an exact fraction `p/q`, or `p` for integers.
 *
 * # Safety
 * `bound` must be a live handle and `out` a valid pointer. The string is
 * released with `kc_string_free`.
 */
enum KcStatus kc_bound_exact(const struct KcBound *bound, enum KcQuantity which, char **out);

/**
 * A quantity rendered with `digits` significant digits.
 *
 * # Safety
 * As for `kc_bound_exact`.
 */
enum KcStatus kc_bound_decimal(const struct KcBound *bound,
                               enum KcQuantity which,
                               uint32_t digits,
                               char **out);

/**
 * The matching target of every vertex used for the bound; `targets` must
 * hold `n` entries.
 *
 * # Safety
 * `bound` must be a live handle and `targets` point to `len` writable entries.
 */
enum KcStatus kc_bound_matching(const struct KcBound *bound, size_t *targets, size_t len);

/**
 * Checks the crossing formula against the explicit construction up to
 * `t_max` doublings. `passed` is false on a mismatch; the status is only
 * non-OK when the check could not run.
 *
 * # Safety
 * `inst` must be a live handle and `passed` a valid pointer.
 */
enum KcStatus kc_verify(const struct KcInstance *inst, uint32_t t_max, bool *passed);

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library; valid until the next call.
 */
const char *kc_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void kc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KCOLOR_H */
