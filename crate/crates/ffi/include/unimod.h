#ifndef UNIMOD_H
#define UNIMOD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum UnimodPlane {
  UNIMOD_PLANE_HYPERBOLIC = 0,
  UNIMOD_PLANE_NONSQUARE = 1,
} UnimodPlane;

typedef enum UnimodStatus {
  UNIMOD_STATUS_OK = 0,
  UNIMOD_STATUS_NULL_POINTER = 1,
  UNIMOD_STATUS_INVALID_UTF8 = 2,
  UNIMOD_STATUS_PARSE = 3,
  UNIMOD_STATUS_INVALID_SPEC = 4,
  UNIMOD_STATUS_EVEN_CHARACTERISTIC = 5,
  UNIMOD_STATUS_NOT_LOCAL = 6,
  UNIMOD_STATUS_TOO_LARGE = 7,
  UNIMOD_STATUS_DEGENERATE = 8,
  UNIMOD_STATUS_NOT_SYMMETRIC = 9,
  UNIMOD_STATUS_DIMENSION_MISMATCH = 10,
  UNIMOD_STATUS_TIMEOUT = 11,
  UNIMOD_STATUS_MISMATCH = 12,
  UNIMOD_STATUS_INTERNAL = 99,
} UnimodStatus;

// A symmetric bilinear form over a ring.
typedef struct UnimodForm UnimodForm;

// A finite local ring.
typedef struct UnimodRing UnimodRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on this thread.
const char *unimod_last_error(void);

// # Safety
// `s` must be null or a string returned by this library.
void unimod_string_free(char *s);

// Builds a ring from a literal such as `kind=Zps p=3 s=2`.
//
// # Safety
// `literal` must be a NUL-terminated string, `out` writable.
enum UnimodStatus unimod_ring_new(const char *literal, struct UnimodRing **out);

// # Safety
// `ring` must be null or a handle from [`unimod_ring_new`], not yet freed.
void unimod_ring_free(struct UnimodRing *ring);

// # Safety
// Valid handle and out-pointer.
enum UnimodStatus unimod_ring_cardinality(const struct UnimodRing *ring, uint64_t *out);

// # Safety
// Valid handle and out-pointer.
enum UnimodStatus unimod_ring_maximal_ideal_size(const struct UnimodRing *ring, uint64_t *out);

// # Safety
// Valid handle and out-pointer.
enum UnimodStatus unimod_ring_characteristic(const struct UnimodRing *ring, uint64_t *out);

// Display label, e.g. `Z9` or `GR(9,2)`.
//
// # Safety
// Valid handle and out-pointer.
enum UnimodStatus unimod_ring_label(const struct UnimodRing *ring, char **out);

// Re-parseable spec literal.
//
// # Safety
// Valid handle and out-pointer.
enum UnimodStatus unimod_ring_spec(const struct UnimodRing *ring, char **out);

// Parses a matrix literal (`0,1;1,0`) over `ring`.
//
// # Safety
// Valid handle, NUL-terminated `matrix`, writable `out`.
enum UnimodStatus unimod_form_new(const struct UnimodRing *ring,
                                  const char *matrix,
                                  struct UnimodForm **out);

// One of the two canonical planes over `ring`.
//
// # Safety
// Valid handle and writable `out`.
enum UnimodStatus unimod_form_plane(const struct UnimodRing *ring,
                                    enum UnimodPlane kind,
                                    struct UnimodForm **out);

// # Safety
// `form` must be null or a live form handle.
void unimod_form_free(struct UnimodForm *form);

// Closed-form prediction for a plane.
//
// # Safety
// Valid handle and out-pointer.
enum UnimodStatus unimod_form_theoretical_s(const struct UnimodForm *form, uint64_t *out);

// Canonical form: writes `u` and the transform `P` (with `PᵀBP` canonical).
// Either out-pointer may be null.
//
// # Safety
// Valid handle; non-null out-pointers must be writable.
enum UnimodStatus unimod_form_canonicalize(const struct UnimodForm *form,
                                           char **u_out,
                                           char **p_out);

// Exact maximum orthogonal set. `witness_out` may be null.
//
// # Safety
// Valid handle; `size_out` writable; `witness_out` null or writable.
enum UnimodStatus unimod_form_max_orthogonal_set(const struct UnimodForm *form,
                                                 uint64_t timeout_ms,
                                                 uint64_t *size_out,
                                                 char **witness_out);

// Checks both planes over `ring` against the closed form. Returns
// [`UnimodStatus::Mismatch`] if any row disagrees.
//
// # Safety
// Valid handle.
enum UnimodStatus unimod_verify_ring(const struct UnimodRing *ring, uint64_t timeout_ms);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UNIMOD_H */
