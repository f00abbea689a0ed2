#ifndef WARING_CERT_H
#define WARING_CERT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WcError {
  WC_ERROR_OK = 0,
  WC_ERROR_NULL_POINTER = 1,
  WC_ERROR_INVALID_UTF8 = 2,
  WC_ERROR_PARSE = 3,
  WC_ERROR_INPUT = 4,
  /**
   * An internal consistency check failed; please report the input.
   */
  WC_ERROR_INVARIANT = 5,
  WC_ERROR_PANIC = 6,
  WC_ERROR_BUFFER_TOO_SMALL = 7,
} WcError;

typedef enum WcStatus {
  WC_STATUS_IDENTIFIABLE = 0,
  WC_STATUS_NOT_IDENTIFIABLE = 1,
  WC_STATUS_UNDECIDED = 2,
} WcStatus;

/**
 * The result of a certification run together with its JSON text.
 */
typedef struct WcCertificate WcCertificate;

/**
 * A parsed instance: points and a sextic over Q or F_p.
 */
typedef struct WcInstance WcInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string. The
 * pointer stays valid until the next call into this library on the thread.
 */
const char *wc_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *wc_version(void);

/**
 * Parses an instance file's JSON text. On success `*out` owns a new handle
 * to be released with `wc_instance_free`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum WcError wc_instance_from_json(const char *json, struct WcInstance **out);

/**
 * Number of points of the instance, 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t wc_instance_length(const struct WcInstance *inst);

/**
 * # Safety
 * `inst` must be null or a handle not freed before.
 */
void wc_instance_free(struct WcInstance *inst);

/**
 * Runs the full pipeline with default parameters and the given seed.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer.
 */
enum WcError wc_certify(const struct WcInstance *inst, uint64_t seed, struct WcCertificate **out);

/**
 * # Safety
 * `cert` must be a live handle and `out` a valid pointer.
 */
enum WcError wc_certificate_status(const struct WcCertificate *cert, enum WcStatus *out);

/**
 * Certified rank, or -1 when minimality was not established.
 *
 * # Safety
 * `cert` must be null or a live handle.
 */
int64_t wc_certificate_rank(const struct WcCertificate *cert);

/**
 * Certificate JSON, owned by the handle and valid until it is freed.
 *
 * # Safety
 * `cert` must be null or a live handle.
 */
const char *wc_certificate_json(const struct WcCertificate *cert);

/**
 * # Safety
 * `cert` must be null or a handle not freed before.
 */
void wc_certificate_free(struct WcCertificate *cert);

/**
 * Checks a witness (bare, inside a certificate, or a generated instance's
 * known witness) against an 18-point instance.
 *
 * # Safety
 * `inst` must be a live handle, `witness_json` nul-terminated and `valid`
 * a valid pointer.
 */
enum WcError wc_verify_witness(const struct WcInstance *inst,
                               const char *witness_json,
                               uint64_t seed,
                               bool *valid);

/**
 * Writes `h(0), ..., h(max_degree)` of the points in a points or instance
 * file into `out`, which must hold `max_degree + 1` entries.
 *
 * # Safety
 * `points_json` must be nul-terminated and `out` valid for `out_len` writes.
 */
enum WcError wc_hilbert_function(const char *points_json,
                                 size_t max_degree,
                                 size_t *out,
                                 size_t out_len);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* WARING_CERT_H */
