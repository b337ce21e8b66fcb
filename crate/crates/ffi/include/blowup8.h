#ifndef BLOWUP8_H
#define BLOWUP8_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum B8Cone {
  B8_CONE_NEF = 0,
  B8_CONE_EFFECTIVE = 1,
  B8_CONE_MOVABLE = 2,
} B8Cone;

// Result codes shared by every entry point.
typedef enum B8Status {
  B8_OK = 0,
  B8_NULL_POINTER = 1,
  B8_INVALID_UTF8 = 2,
  B8_PARSE_ERROR = 3,
  // The class is not in the requested cone. Not a failure of the call.
  B8_NOT_IN_CONE = 4,
  B8_STEP_LIMIT = 5,
  B8_SCALE_EXCEEDED = 6,
  B8_INVALID_CERTIFICATE = 7,
  B8_INVALID_ARGUMENT = 8,
  // A panic was caught at the boundary.
  B8_INTERNAL = 9,
} B8Status;

// Opaque decomposition certificate.
typedef struct B8Certificate B8Certificate;

// Opaque divisor class.
typedef struct B8Divisor B8Divisor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failed call on this thread, or NULL. The
// pointer stays valid until the next call into this library.
const char *b8_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *b8_version(void);

// # Safety
// `s` must be NULL or a string returned by this library and not yet freed.
void b8_string_free(char *s);

// Parses `"d;m1,...,m8"` into a new handle.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum B8Status b8_divisor_parse(const char *text, struct B8Divisor **out);

// # Safety
// `d` must be NULL or a handle from this library and not yet freed.
void b8_divisor_free(struct B8Divisor *d);

// Canonical text form of `d`; free with [`b8_string_free`].
//
// # Safety
// `d` must be a live handle and `out` a valid pointer.
enum B8Status b8_divisor_to_string(const struct B8Divisor *d, char **out);

// Intersection pairing `(a, b)` as an exact rational string.
//
// # Safety
// `a`, `b` must be live handles and `out` a valid pointer.
enum B8Status b8_pairing(const struct B8Divisor *a, const struct B8Divisor *b, char **out);

// Reduces `d` to standard form. `out_standard` receives a new handle,
// `out_word` the comma-separated Weyl word, `out_steps` the number of
// Cremona steps. `out_word` and `out_steps` may be NULL.
//
// # Safety
// `d` must be a live handle; non-NULL out pointers must be valid.
enum B8Status b8_reduce(const struct B8Divisor *d,
                        uintptr_t max_steps,
                        struct B8Divisor **out_standard,
                        char **out_word,
                        uintptr_t *out_steps);

// # Safety
// `d` must be a live handle and `out` a valid pointer.
enum B8Status b8_is_nef(const struct B8Divisor *d, bool *out);

// Whether `d` lies in the Weyl orbit of `E_8`.
//
// # Safety
// `d` must be a live handle and `out` a valid pointer.
enum B8Status b8_is_minus_one_divisor(const struct B8Divisor *d, uintptr_t max_steps, bool *out);

// Decomposes `d` over the generators of `cone`. Returns `B8_NOT_IN_CONE`
// (with the reason in the last error message) when `d` is outside it.
//
// # Safety
// `d` must be a live handle and `out` a valid pointer.
enum B8Status b8_decompose(const struct B8Divisor *d,
                           enum B8Cone cone,
                           uintptr_t max_steps,
                           struct B8Certificate **out);

// Decomposes the curve class `"a;c1,...,c8"` over `e_i` and `l_ij`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum B8Status b8_decompose_curve(const char *text, struct B8Certificate **out);

// Reads a certificate from its JSON form without checking it.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum B8Status b8_certificate_from_json(const char *json, struct B8Certificate **out);

// # Safety
// `c` must be a live handle and `out` a valid pointer.
enum B8Status b8_certificate_to_json(const struct B8Certificate *c, char **out);

// Re-sums the certificate exactly. `B8_OK` when valid,
// `B8_INVALID_CERTIFICATE` otherwise.
//
// # Safety
// `c` must be a live handle.
enum B8Status b8_certificate_check(const struct B8Certificate *c);

// Number of terms in the certificate.
//
// # Safety
// `c` must be a live handle and `out` a valid pointer.
enum B8Status b8_certificate_len(const struct B8Certificate *c, uintptr_t *out);

// # Safety
// `c` must be NULL or a handle from this library and not yet freed.
void b8_certificate_free(struct B8Certificate *c);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BLOWUP8_H */
