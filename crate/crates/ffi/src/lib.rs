//! C ABI over `joints-core`.
//!
//! Arrangements live behind an opaque handle. Results that carry structure
//! are returned as JSON strings owned by the library and released with
//! [`joints_string_free`]. Every call returns a [`JointsStatus`]; on failure
//! the thread's last error message is available from
//! [`joints_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use joints_core::coloring::{color_from_prune, color_incremental, pigeonhole_finish};
use joints_core::generators::{grid_lines, random_concurrent_lines, star_bundle};
use joints_core::lemma::lemma_bound_check;
use joints_core::pruning::{prune, verify_trace, PruneTrace};
use joints_core::report::report;
use joints_core::{detect_joints, Arrangement, JointsError, PointN};
use serde::Serialize;

/// Status codes returned by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    CheckFailed = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointsColorMethod {
    Prune = 0,
    Incremental = 1,
}

/// Opaque line arrangement.
pub struct JointsArrangement {
    inner: Arrangement,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(JointsStatus, String);

impl From<JointsError> for Failure {
    fn from(e: JointsError) -> Self {
        let status = match e {
            JointsError::VerificationFailed { .. }
            | JointsError::ContradictionDetected(_)
            | JointsError::UncoveredJoint(_)
            | JointsError::UnverifiedCertificate(_)
            | JointsError::LinePrecondition { .. }
            | JointsError::PointPrecondition { .. } => JointsStatus::CheckFailed,
            JointsError::InternalInvariantViolation(_) => JointsStatus::Internal,
            _ => JointsStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> JointsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => JointsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside the library".into());
            JointsStatus::Internal
        }
    }
}

fn null() -> Failure {
    Failure(JointsStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(JointsStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a>(h: *const JointsArrangement) -> Result<&'a Arrangement, Failure> {
    h.as_ref().map(|h| &h.inner).ok_or_else(null)
}

fn parse<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, Failure> {
    serde_json::from_str(s).map_err(|e| Failure(JointsStatus::Parse, e.to_string()))
}

unsafe fn write_json<T: Serialize>(out: *mut *mut c_char, value: &T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    let s = serde_json::to_string(value)
        .map_err(|e| Failure(JointsStatus::Internal, e.to_string()))?;
    *out = CString::new(s).expect("json has no nul bytes").into_raw();
    Ok(())
}

unsafe fn write_handle(out: *mut *mut JointsArrangement, arr: Arrangement) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(JointsArrangement { inner: arr }));
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn joints_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn joints_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn joints_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an arrangement document (`{"dimension": n, "lines": [...]}`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn joints_arrangement_from_json(
    json: *const c_char,
    out: *mut *mut JointsArrangement,
) -> JointsStatus {
    guard(|| {
        let arr: Arrangement = parse(read_str(json)?)?;
        write_handle(out, arr)
    })
}

/// Axis-parallel grid with `k^n` joints.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn joints_arrangement_grid(
    n: usize,
    k: usize,
    out: *mut *mut JointsArrangement,
) -> JointsStatus {
    guard(|| {
        if n < 2 || k == 0 {
            return Err(Failure(JointsStatus::InvalidInput, "need n >= 2 and k >= 1".into()));
        }
        write_handle(out, grid_lines(n, k))
    })
}

/// `count` lines through a single point.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn joints_arrangement_star(
    n: usize,
    count: usize,
    out: *mut *mut JointsArrangement,
) -> JointsStatus {
    guard(|| write_handle(out, star_bundle(n, count)?))
}

/// Seeded random lines through `pool` shared points.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn joints_arrangement_random(
    n: usize,
    count: usize,
    pool: usize,
    seed: u64,
    out: *mut *mut JointsArrangement,
) -> JointsStatus {
    guard(|| write_handle(out, random_concurrent_lines(n, count, pool, seed)?))
}

/// # Safety
/// `h` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn joints_arrangement_free(h: *mut JointsArrangement) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Returns 0 for a NULL handle.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn joints_arrangement_dimension(h: *const JointsArrangement) -> usize {
    h.as_ref().map_or(0, |h| h.inner.dimension())
}

/// Returns 0 for a NULL handle.
///
/// # Safety
/// `h` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn joints_arrangement_line_count(h: *const JointsArrangement) -> usize {
    h.as_ref().map_or(0, |h| h.inner.len())
}

/// Serializes the arrangement back to JSON.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn joints_arrangement_to_json(
    h: *const JointsArrangement,
    out: *mut *mut c_char,
) -> JointsStatus {
    guard(|| write_json(out, handle(h)?))
}

/// Detects joints; writes their records as a JSON array and the count to
/// `count` when it is not NULL.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable; `count` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn joints_detect(
    h: *const JointsArrangement,
    count: *mut usize,
    out: *mut *mut c_char,
) -> JointsStatus {
    guard(|| {
        let joints = detect_joints(handle(h)?);
        write_json(out, &joints)?;
        if let Some(c) = count.as_mut() {
            *c = joints.len();
        }
        Ok(())
    })
}

/// Prunes the arrangement and writes the trace as JSON.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn joints_prune(
    h: *const JointsArrangement,
    out: *mut *mut c_char,
) -> JointsStatus {
    guard(|| write_json(out, &prune(handle(h)?)?))
}

/// Replays a trace produced by [`joints_prune`]. Returns `CheckFailed` when
/// the trace does not verify.
///
/// # Safety
/// `h` must be a live handle; `trace_json` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn joints_verify_trace(
    h: *const JointsArrangement,
    trace_json: *const c_char,
) -> JointsStatus {
    guard(|| {
        let arr = handle(h)?;
        let trace: PruneTrace = parse(read_str(trace_json)?)?;
        verify_trace(&trace, arr)?;
        Ok(())
    })
}

/// Colors every joint by one incident line and writes
/// `{"coloring": ..., "report": ...}`.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn joints_color(
    h: *const JointsArrangement,
    method: JointsColorMethod,
    out: *mut *mut c_char,
) -> JointsStatus {
    guard(|| {
        let arr = handle(h)?;
        let coloring = match method {
            JointsColorMethod::Prune => color_from_prune(&prune(arr)?, arr)?,
            JointsColorMethod::Incremental => color_incremental(arr)?,
        };
        let report = pigeonhole_finish(&coloring, arr)?;
        write_json(
            out,
            &serde_json::json!({ "coloring": coloring, "report": report }),
        )
    })
}

/// Runs the lemma check on all joints, or on the points of `points_json`
/// (a JSON array of points) when it is not NULL.
///
/// # Safety
/// `h` must be a live handle; `points_json` may be NULL; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn joints_lemma(
    h: *const JointsArrangement,
    points_json: *const c_char,
    out: *mut *mut c_char,
) -> JointsStatus {
    guard(|| {
        let arr = handle(h)?;
        let points: Vec<PointN> = if points_json.is_null() {
            detect_joints(arr).into_iter().map(|j| j.point).collect()
        } else {
            parse(read_str(points_json)?)?
        };
        write_json(out, &lemma_bound_check(&points, arr)?)
    })
}

/// Summary row for the arrangement as JSON.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn joints_report(
    h: *const JointsArrangement,
    out: *mut *mut c_char,
) -> JointsStatus {
    guard(|| write_json(out, &report(handle(h)?)?))
}
