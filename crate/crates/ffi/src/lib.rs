//! C ABI over `gouy-core`.
//!
//! Conventions:
//! - every fallible call returns a [`GouyStatus`] and writes its result
//!   through an out-pointer, which is left untouched on failure;
//! - the message of the most recent failure on the calling thread is
//!   available from [`gouy_last_error_message`];
//! - [`GouySpec`] is an opaque handle created by [`gouy_spec_new`] and
//!   released by [`gouy_spec_free`];
//! - panics never cross the boundary; they surface as `GOUY_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gouy_core::cli::oracle_check;
use gouy_core::dynamics;
use gouy_core::estimation::{cfi_closed_form, qfi_closed_form, qfi_evolved, QfiOptions};
use gouy_core::oracle::QuadratureConfig;
use gouy_core::{Error, UnitSystem, WavepacketSpec};

/// Result codes. The detailed error kind is in the thread's last message.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GouyStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Parameters out of domain (non-positive frequency, non-finite value, ...).
    InvalidArgument = 2,
    /// Evaluation at a focal time or series pole.
    Singular = 3,
    /// The operation needs `omega == omega0`.
    NotResonant = 4,
    /// A numerical procedure failed its own accuracy check.
    Numerical = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

/// Opaque wavepacket description.
pub struct GouySpec {
    inner: WavepacketSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> GouyStatus {
    match err {
        Error::CurvatureSingular { .. } | Error::KernelSingular { .. } | Error::ExpansionPole { .. } => {
            GouyStatus::Singular
        }
        Error::NotResonant { .. } => GouyStatus::NotResonant,
        Error::TruncationTooTight { .. }
        | Error::NotGaussian { .. }
        | Error::NotPositiveDefinite { .. }
        | Error::UncertaintyViolation { .. }
        | Error::GridTooCoarse { .. }
        | Error::PurityDivergence { .. }
        | Error::ZeroInformation
        | Error::StepTooSmall { .. }
        | Error::NotConverged { .. } => GouyStatus::Numerical,
        _ => GouyStatus::InvalidArgument,
    }
}

/// Run `f`, store its value in `out`, translate errors and panics.
fn guard<T>(out: *mut T, f: impl FnOnce() -> gouy_core::Result<T>) -> GouyStatus {
    if out.is_null() {
        set_last_error("null output pointer".into());
        return GouyStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(value)) => {
            // SAFETY: checked non-null; the caller guarantees it is writable.
            unsafe { out.write(value) };
            GouyStatus::Ok
        }
        Ok(Err(e)) => {
            set_last_error(format!("{}: {e}", e.kind()));
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic".into());
            GouyStatus::Panic
        }
    }
}

fn spec_ref<'a>(spec: *const GouySpec) -> gouy_core::Result<&'a WavepacketSpec> {
    // SAFETY: non-null handles come from `gouy_spec_new` and are live until freed.
    unsafe { spec.as_ref() }
        .map(|s| &s.inner)
        .ok_or_else(|| Error::InvalidArgument("null spec handle".into()))
}

/// Create a spec. `hbar` and `mass` fix the unit system; pass 1 for
/// natural units. On success `*out` owns a handle for [`gouy_spec_free`].
#[no_mangle]
pub extern "C" fn gouy_spec_new(
    omega0: f64,
    omega: f64,
    gamma: f64,
    hbar: f64,
    mass: f64,
    out: *mut *mut GouySpec,
) -> GouyStatus {
    guard(out, || {
        let inner = WavepacketSpec::new(omega0, omega, gamma, UnitSystem::new(hbar, mass)?)?;
        Ok(Box::into_raw(Box::new(GouySpec { inner })))
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `spec` must be null or a handle from [`gouy_spec_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gouy_spec_free(spec: *mut GouySpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Initial width `sigma0 = sqrt(hbar / (m omega0))`.
#[no_mangle]
pub extern "C" fn gouy_spec_sigma0(spec: *const GouySpec, out: *mut f64) -> GouyStatus {
    guard(out, || Ok(spec_ref(spec)?.sigma0()))
}

/// Width `B(t)`.
#[no_mangle]
pub extern "C" fn gouy_width(spec: *const GouySpec, t: f64, out: *mut f64) -> GouyStatus {
    guard(out, || dynamics::width(spec_ref(spec)?, t))
}

/// Inverse radius of curvature `u(t)`; `GOUY_STATUS_SINGULAR` at focal times.
#[no_mangle]
pub extern "C" fn gouy_inv_curvature(spec: *const GouySpec, t: f64, out: *mut f64) -> GouyStatus {
    guard(out, || dynamics::inv_curvature(spec_ref(spec)?, t))
}

/// Gouy phase on the principal branch, in `(-pi/4, pi/4]`.
#[no_mangle]
pub extern "C" fn gouy_phase_principal(spec: *const GouySpec, t: f64, out: *mut f64) -> GouyStatus {
    guard(out, || dynamics::gouy_principal(spec_ref(spec)?, t))
}

/// Gouy phase on the continuous branch (zero at `t = 0`).
#[no_mangle]
pub extern "C" fn gouy_phase_unwrapped(spec: *const GouySpec, t: f64, out: *mut f64) -> GouyStatus {
    guard(out, || dynamics::gouy_continuous(spec_ref(spec)?, t))
}

/// Gouy phase rate `omega0 / (2 (B / sigma0)^2)`.
#[no_mangle]
pub extern "C" fn gouy_phase_rate(spec: *const GouySpec, t: f64, out: *mut f64) -> GouyStatus {
    guard(out, || dynamics::gouy_rate(spec_ref(spec)?, t))
}

/// Classical Fisher information for `omega` from a position measurement.
#[no_mangle]
pub extern "C" fn gouy_cfi(spec: *const GouySpec, t: f64, out: *mut f64) -> GouyStatus {
    guard(out, || cfi_closed_form(spec_ref(spec)?, t))
}

/// Quantum Fisher information for `omega`; `numeric != 0` evaluates the
/// covariance formula instead of the closed form. Resonant specs only.
#[no_mangle]
pub extern "C" fn gouy_qfi(spec: *const GouySpec, t: f64, numeric: i32, out: *mut f64) -> GouyStatus {
    guard(out, || {
        let sp = spec_ref(spec)?;
        if numeric != 0 {
            qfi_evolved(sp, t, QfiOptions::default())
        } else {
            qfi_closed_form(sp, t)
        }
    })
}

/// Relative L2 distance between the closed-form state and direct
/// propagator quadrature at time `t`, with the default quadrature settings.
#[no_mangle]
pub extern "C" fn gouy_oracle_l2_error(spec: *const GouySpec, t: f64, out: *mut f64) -> GouyStatus {
    guard(out, || {
        let report = oracle_check(spec_ref(spec)?, &[t], &QuadratureConfig::default())?;
        let row = &report.rows[0];
        match (row.l2_error, &row.flag) {
            (Some(e), _) => Ok(e),
            (None, Some(flag)) if flag == "KernelSingular" => {
                Err(Error::KernelSingular {
                t,
                sin_abs: (spec_ref(spec)?.omega() * t).sin().abs(),
            })
            }
            (None, flag) => Err(Error::InvalidArgument(format!("oracle failed: {flag:?}"))),
        }
    })
}

/// Message for the most recent failure on this thread, or null. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gouy_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn gouy_status_name(status: GouyStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        GouyStatus::Ok => b"ok\0",
        GouyStatus::NullPointer => b"null pointer\0",
        GouyStatus::InvalidArgument => b"invalid argument\0",
        GouyStatus::Singular => b"singular\0",
        GouyStatus::NotResonant => b"not resonant\0",
        GouyStatus::Numerical => b"numerical failure\0",
        GouyStatus::Panic => b"panic\0",
    };
    name.as_ptr().cast()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gouy_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
