#ifndef HALLBASIS_H
#define HALLBASIS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum HbStatus {
  HB_STATUS_OK = 0,
  HB_STATUS_NULL_POINTER = 1,
  HB_STATUS_INVALID_UTF8 = 2,
  HB_STATUS_CONFIG = 3,
  HB_STATUS_PARSE = 4,
  HB_STATUS_CAPACITY = 5,
  HB_STATUS_NOT_MEMBER = 6,
  HB_STATUS_OUT_OF_RANGE = 7,
  HB_STATUS_INTERNAL = 8,
} HbStatus;

/**
 * Opaque handle to a Hall set with its decomposer.
 */
typedef struct HbSession HbSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a session for `order` (`length`, `lyndon`, `fibo`, `supergeom`, `sharp:<n>`).
 * `alphabet` 0 selects the order's default alphabet size.
 *
 * # Safety
 * `order` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HbStatus hb_session_new(const char *order,
                             uint32_t alphabet,
                             uint32_t max_len,
                             struct HbSession **out);

/**
 * Releases a session. Null is ignored.
 *
 * # Safety
 * `session` must come from `hb_session_new` and not be used afterwards.
 */
void hb_session_free(struct HbSession *session);

/**
 * Number of Hall elements of length `len`.
 *
 * # Safety
 * `session` and `out` must be valid pointers.
 */
enum HbStatus hb_hall_count(const struct HbSession *session, uint32_t len, uint64_t *out);

/**
 * The `index`-th Hall element of length `len`, in increasing order, as bracket text.
 *
 * # Safety
 * `session` and `out` must be valid pointers.
 */
enum HbStatus hb_hall_element(const struct HbSession *session,
                              uint32_t len,
                              uint64_t index,
                              char **out);

/**
 * Decomposes `[a, b]` and returns the series as a JSON document.
 *
 * # Safety
 * `session`, `a`, `b` and `out` must be valid pointers; `a`, `b` NUL-terminated.
 */
enum HbStatus hb_decompose(const struct HbSession *session,
                           const char *a,
                           const char *b,
                           char **out);

/**
 * The l1 norm of `[a, b]` on the basis, as a decimal string.
 *
 * # Safety
 * `session`, `a`, `b` and `out` must be valid pointers; `a`, `b` NUL-terminated.
 */
enum HbStatus hb_decompose_norm(const struct HbSession *session,
                                const char *a,
                                const char *b,
                                char **out);

/**
 * Dimension of the degree-`n` component of the free Lie algebra on `k` letters, as a decimal string.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum HbStatus hb_witt_dimension(uint64_t k,
                                uint64_t n,
                                char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void hb_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. Valid until the next failing call.
 */
const char *hb_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HALLBASIS_H */
