//! C ABI for `unimod-core`.
//!
//! Every fallible call returns a [`UnimodStatus`]; on failure the message is
//! available from [`unimod_last_error`] on the same thread. Handles are
//! opaque and must be released with their `_free` function. Strings returned
//! through `char **` out-parameters are owned by the caller and released with
//! [`unimod_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use unimod_core::config::parse_ring_literal;
use unimod_core::form::BilinearForm;
use unimod_core::orthoset::{self, PlaneKind, SearchOptions};
use unimod_core::ring::LocalRing;
use unimod_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnimodStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidSpec = 4,
    EvenCharacteristic = 5,
    NotLocal = 6,
    TooLarge = 7,
    Degenerate = 8,
    NotSymmetric = 9,
    DimensionMismatch = 10,
    Timeout = 11,
    Mismatch = 12,
    Internal = 99,
}

impl From<&Error> for UnimodStatus {
    fn from(e: &Error) -> Self {
        match e.root() {
            Error::Parse { .. } | Error::Literal { .. } => UnimodStatus::Parse,
            Error::EvenCharacteristic => UnimodStatus::EvenCharacteristic,
            Error::NotLocal(_) | Error::ReducibleModulus { .. } => UnimodStatus::NotLocal,
            Error::NotPrime(_) | Error::InvalidSpec(_) | Error::UnsupportedDimension(_) => UnimodStatus::InvalidSpec,
            Error::TooLarge { .. } => UnimodStatus::TooLarge,
            Error::Degenerate | Error::NotAUnit => UnimodStatus::Degenerate,
            Error::NotSymmetric => UnimodStatus::NotSymmetric,
            Error::DimensionMismatch { .. } => UnimodStatus::DimensionMismatch,
            Error::Timeout { .. } => UnimodStatus::Timeout,
            _ => UnimodStatus::Internal,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnimodPlane {
    Hyperbolic = 0,
    Nonsquare = 1,
}

/// A finite local ring.
pub struct UnimodRing(LocalRing);

/// A symmetric bilinear form over a ring.
pub struct UnimodForm(BilinearForm);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(f: impl FnOnce() -> Result<(), UnimodStatus>) -> UnimodStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UnimodStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            UnimodStatus::Internal
        }
    }
}

fn fail(e: Error) -> UnimodStatus {
    set_error(e.to_string());
    UnimodStatus::from(&e)
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, UnimodStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(UnimodStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        UnimodStatus::InvalidUtf8
    })
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, UnimodStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle");
        UnimodStatus::NullPointer
    })
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), UnimodStatus> {
    if out.is_null() {
        set_error("null out-parameter");
        return Err(UnimodStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn options(timeout_ms: u64) -> SearchOptions {
    SearchOptions {
        timeout: Duration::from_millis(timeout_ms),
        parallel: false,
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn unimod_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn unimod_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a ring from a literal such as `kind=Zps p=3 s=2`.
///
/// # Safety
/// `literal` must be a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn unimod_ring_new(literal: *const c_char, out: *mut *mut UnimodRing) -> UnimodStatus {
    guard(|| {
        let text = str_arg(literal)?;
        let ring = parse_ring_literal(text)
            .and_then(|spec| LocalRing::new(&spec))
            .map_err(fail)?;
        put(out, Box::into_raw(Box::new(UnimodRing(ring))))
    })
}

/// # Safety
/// `ring` must be null or a handle from [`unimod_ring_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn unimod_ring_free(ring: *mut UnimodRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// # Safety
/// Valid handle and out-pointer.
#[no_mangle]
pub unsafe extern "C" fn unimod_ring_cardinality(ring: *const UnimodRing, out: *mut u64) -> UnimodStatus {
    guard(|| put(out, deref(ring)?.0.cardinality()))
}

/// # Safety
/// Valid handle and out-pointer.
#[no_mangle]
pub unsafe extern "C" fn unimod_ring_maximal_ideal_size(ring: *const UnimodRing, out: *mut u64) -> UnimodStatus {
    guard(|| put(out, deref(ring)?.0.maximal_ideal_size()))
}

/// # Safety
/// Valid handle and out-pointer.
#[no_mangle]
pub unsafe extern "C" fn unimod_ring_characteristic(ring: *const UnimodRing, out: *mut u64) -> UnimodStatus {
    guard(|| put(out, deref(ring)?.0.characteristic()))
}

/// Display label, e.g. `Z9` or `GR(9,2)`.
///
/// # Safety
/// Valid handle and out-pointer.
#[no_mangle]
pub unsafe extern "C" fn unimod_ring_label(ring: *const UnimodRing, out: *mut *mut c_char) -> UnimodStatus {
    guard(|| put(out, owned_string(deref(ring)?.0.label().to_owned())))
}

/// Re-parseable spec literal.
///
/// # Safety
/// Valid handle and out-pointer.
#[no_mangle]
pub unsafe extern "C" fn unimod_ring_spec(ring: *const UnimodRing, out: *mut *mut c_char) -> UnimodStatus {
    guard(|| put(out, owned_string(deref(ring)?.0.spec().to_literal())))
}

/// Parses a matrix literal (`0,1;1,0`) over `ring`.
///
/// # Safety
/// Valid handle, NUL-terminated `matrix`, writable `out`.
#[no_mangle]
pub unsafe extern "C" fn unimod_form_new(
    ring: *const UnimodRing,
    matrix: *const c_char,
    out: *mut *mut UnimodForm,
) -> UnimodStatus {
    guard(|| {
        let ring = deref(ring)?;
        let form = BilinearForm::parse(&ring.0, str_arg(matrix)?).map_err(fail)?;
        put(out, Box::into_raw(Box::new(UnimodForm(form))))
    })
}

/// One of the two canonical planes over `ring`.
///
/// # Safety
/// Valid handle and writable `out`.
#[no_mangle]
pub unsafe extern "C" fn unimod_form_plane(
    ring: *const UnimodRing,
    kind: UnimodPlane,
    out: *mut *mut UnimodForm,
) -> UnimodStatus {
    guard(|| {
        let ring = deref(ring)?;
        let kind = match kind {
            UnimodPlane::Hyperbolic => PlaneKind::Hyperbolic,
            UnimodPlane::Nonsquare => PlaneKind::Nonsquare,
        };
        put(out, Box::into_raw(Box::new(UnimodForm(kind.form(&ring.0)))))
    })
}

/// # Safety
/// `form` must be null or a live form handle.
#[no_mangle]
pub unsafe extern "C" fn unimod_form_free(form: *mut UnimodForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Closed-form prediction for a plane.
///
/// # Safety
/// Valid handle and out-pointer.
#[no_mangle]
pub unsafe extern "C" fn unimod_form_theoretical_s(form: *const UnimodForm, out: *mut u64) -> UnimodStatus {
    guard(|| {
        let s = orthoset::theoretical_s(&deref(form)?.0).map_err(fail)?;
        put(out, s)
    })
}

/// Canonical form: writes `u` and the transform `P` (with `PᵀBP` canonical).
/// Either out-pointer may be null.
///
/// # Safety
/// Valid handle; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn unimod_form_canonicalize(
    form: *const UnimodForm,
    u_out: *mut *mut c_char,
    p_out: *mut *mut c_char,
) -> UnimodStatus {
    guard(|| {
        let form = &deref(form)?.0;
        let (p, canonical) = form.canonicalize().map_err(fail)?;
        if !u_out.is_null() {
            put(u_out, owned_string(form.ring().render(canonical.u)))?;
        }
        if !p_out.is_null() {
            put(p_out, owned_string(p.render()))?;
        }
        Ok(())
    })
}

/// Exact maximum orthogonal set. `witness_out` may be null.
///
/// # Safety
/// Valid handle; `size_out` writable; `witness_out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn unimod_form_max_orthogonal_set(
    form: *const UnimodForm,
    timeout_ms: u64,
    size_out: *mut u64,
    witness_out: *mut *mut c_char,
) -> UnimodStatus {
    guard(|| {
        let found = orthoset::max_orthogonal_set(&deref(form)?.0, &options(timeout_ms)).map_err(fail)?;
        put(size_out, found.max_size as u64)?;
        if !witness_out.is_null() {
            put(witness_out, owned_string(found.witness.render()))?;
        }
        Ok(())
    })
}

/// Checks both planes over `ring` against the closed form. Returns
/// [`UnimodStatus::Mismatch`] if any row disagrees.
///
/// # Safety
/// Valid handle.
#[no_mangle]
pub unsafe extern "C" fn unimod_verify_ring(ring: *const UnimodRing, timeout_ms: u64) -> UnimodStatus {
    guard(|| {
        let report = orthoset::verify_theorem(&deref(ring)?.0, &options(timeout_ms)).map_err(fail)?;
        if report.passed() {
            Ok(())
        } else {
            set_error("brute force disagrees with the closed form");
            Err(UnimodStatus::Mismatch)
        }
    })
}
