#ifndef GOUY_H
#define GOUY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. The detailed error kind is in the thread's last message.
typedef enum GouyStatus {
  GOUY_STATUS_OK = 0,
  // A required pointer argument was null.
  GOUY_STATUS_NULL_POINTER = 1,
  // Parameters out of domain (non-positive frequency, non-finite value, ...).
  GOUY_STATUS_INVALID_ARGUMENT = 2,
  // Evaluation at a focal time or series pole.
  GOUY_STATUS_SINGULAR = 3,
  // The operation needs `omega == omega0`.
  GOUY_STATUS_NOT_RESONANT = 4,
  // A numerical procedure failed its own accuracy check.
  GOUY_STATUS_NUMERICAL = 5,
  // A Rust panic was caught at the boundary.
  GOUY_STATUS_PANIC = 6,
} GouyStatus;

// Opaque wavepacket description.
typedef struct GouySpec GouySpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Create a spec. `hbar` and `mass` fix the unit system; pass 1 for
// natural units. On success `*out` owns a handle for [`gouy_spec_free`].
enum GouyStatus gouy_spec_new(double omega0,
                              double omega,
                              double gamma,
                              double hbar,
                              double mass,
                              struct GouySpec **out);

// Release a handle. Null is ignored.
//
// # Safety
// `spec` must be null or a handle from [`gouy_spec_new`] not yet freed.
void gouy_spec_free(struct GouySpec *spec);

// Initial width `sigma0 = sqrt(hbar / (m omega0))`.
enum GouyStatus gouy_spec_sigma0(const struct GouySpec *spec, double *out);

// Width `B(t)`.
enum GouyStatus gouy_width(const struct GouySpec *spec, double t, double *out);

// Inverse radius of curvature `u(t)`; `GOUY_STATUS_SINGULAR` at focal times.
enum GouyStatus gouy_inv_curvature(const struct GouySpec *spec, double t, double *out);

// Gouy phase on the principal branch, in `(-pi/4, pi/4]`.
enum GouyStatus gouy_phase_principal(const struct GouySpec *spec, double t, double *out);

// Gouy phase on the continuous branch (zero at `t = 0`).
enum GouyStatus gouy_phase_unwrapped(const struct GouySpec *spec, double t, double *out);

// Gouy phase rate `omega0 / (2 (B / sigma0)^2)`.
enum GouyStatus gouy_phase_rate(const struct GouySpec *spec, double t, double *out);

// Classical Fisher information for `omega` from a position measurement.
enum GouyStatus gouy_cfi(const struct GouySpec *spec, double t, double *out);

// Quantum Fisher information for `omega`; `numeric != 0` evaluates the
// covariance formula instead of the closed form. Resonant specs only.
enum GouyStatus gouy_qfi(const struct GouySpec *spec, double t, int32_t numeric, double *out);

// Relative L2 distance between the closed-form state and direct
// propagator quadrature at time `t`, with the default quadrature settings.
enum GouyStatus gouy_oracle_l2_error(const struct GouySpec *spec, double t, double *out);

// Message for the most recent failure on this thread, or null. The
// pointer stays valid until the next failing call on the same thread.
const char *gouy_last_error_message(void);

// Static name of a status code.
const char *gouy_status_name(enum GouyStatus status);

// Library version as a static NUL-terminated string.
const char *gouy_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GOUY_H */
