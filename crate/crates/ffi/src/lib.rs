//! C interface to `toricproj`.
//!
//! Problems and results are opaque heap handles released with their
//! `_free` function. Every fallible call returns a [`TpStatus`]; on failure
//! [`tp_last_error_message`] describes the error until the next call on
//! the same thread. Strings handed out by the library are released with
//! [`tp_string_free`]. Panics never cross the boundary: they are reported
//! as [`TpStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use toricproj::algebra::Rat;
use toricproj::io::{emit_resolution, emit_structured, parse_resolution, SystemFile};
use toricproj::polytope::mixed_volume;
use toricproj::projection::{q_projection, verify_result, ProjectionProblem, ProjectionResult};
use toricproj::supports::trans_basis;
use toricproj::Error;

/// Outcome of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TpStatus {
    Ok = 0,
    /// The computation failed (degenerate input, exhausted retries,
    /// failed verification).
    MathFailure = 1,
    /// Malformed input text.
    ParseError = 2,
    /// Null pointer, wrong length or out-of-range argument.
    InvalidArgument = 3,
    /// Internal error; the library state is unaffected.
    Panic = 4,
}

/// Which random choice [`tp_problem_pin`] fixes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TpPin {
    /// Values of the specialized variables.
    B = 0,
    /// Separating form, one coefficient per variable.
    Lambda = 1,
    /// Projection form, one coefficient per variable.
    Mu = 2,
    /// Expansion point of the free variables.
    Xi = 3,
}

/// A parsed projection problem.
pub struct TpProblem(ProjectionProblem);

/// The outcome of a projection.
pub struct TpResult(ProjectionResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(TpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } | Error::Arity { .. } | Error::EmptySupport => TpStatus::ParseError,
            Error::InvalidArgument(_) => TpStatus::InvalidArgument,
            _ => TpStatus::MathFailure,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: &str) -> Failure {
    Failure(TpStatus::InvalidArgument, msg.to_string())
}

fn set_error(msg: Option<String>) {
    let msg = msg.map(|m| CString::new(m.replace('\0', " ")).expect("interior nuls removed"));
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(None);
            TpStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(Some(msg));
            status
        }
        Err(_) => {
            set_error(Some("internal error".into()));
            TpStatus::Panic
        }
    }
}

/// # Safety
/// `s` is null or a valid NUL-terminated string.
unsafe fn read_text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(invalid("null string"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(TpStatus::ParseError, "input is not UTF-8".into()))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .expect("library output has no NUL")
        .into_raw()
}

/// Parses a system file. The file must set `ell`.
///
/// # Safety
/// `text` is a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tp_problem_parse(
    text: *const c_char,
    out: *mut *mut TpProblem,
) -> TpStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        let problem = SystemFile::parse(read_text(text)?)?.into_problem()?;
        *out = Box::into_raw(Box::new(TpProblem(problem)));
        Ok(())
    })
}

/// # Safety
/// `problem` is null or a handle from [`tp_problem_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tp_problem_free(problem: *mut TpProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Seeds the random choices of the projection.
///
/// # Safety
/// `problem` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn tp_problem_set_seed(problem: *mut TpProblem, seed: u64) -> TpStatus {
    guard(|| {
        let p = problem.as_mut().ok_or_else(|| invalid("null problem"))?;
        p.0.seed = seed;
        Ok(())
    })
}

/// Fixes one random choice to `len` given values instead of drawing it.
/// Lengths are checked when the projection runs.
///
/// # Safety
/// `problem` is a live handle and `values` points to `len` integers.
#[no_mangle]
pub unsafe extern "C" fn tp_problem_pin(
    problem: *mut TpProblem,
    which: TpPin,
    values: *const i64,
    len: usize,
) -> TpStatus {
    guard(|| {
        let p = problem.as_mut().ok_or_else(|| invalid("null problem"))?;
        if values.is_null() && len > 0 {
            return Err(invalid("null values"));
        }
        let v: Vec<i64> = if len == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(values, len).to_vec()
        };
        let pins = &mut p.0.pins;
        match which {
            TpPin::B => pins.b = Some(v),
            TpPin::Lambda => pins.lambda = Some(v),
            TpPin::Mu => pins.mu = Some(v),
            TpPin::Xi => pins.xi = Some(v.into_iter().map(Rat::from_int).collect()),
        }
        Ok(())
    })
}

/// Runs the projection.
///
/// # Safety
/// `problem` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tp_project(
    problem: *const TpProblem,
    out: *mut *mut TpResult,
) -> TpStatus {
    guard(|| {
        let p = problem.as_ref().ok_or_else(|| invalid("null problem"))?;
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        let r = q_projection(&p.0)?;
        *out = Box::into_raw(Box::new(TpResult(r)));
        Ok(())
    })
}

/// Parses a resolution file.
///
/// # Safety
/// `text` is a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tp_result_parse(text: *const c_char, out: *mut *mut TpResult) -> TpStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        let r = parse_resolution(read_text(text)?)?;
        *out = Box::into_raw(Box::new(TpResult(r)));
        Ok(())
    })
}

/// Degree of the projected resolution, or 0 for a dense image.
///
/// # Safety
/// `result` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tp_result_degree(result: *const TpResult, out: *mut usize) -> TpStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| invalid("null result"))?;
        let out = out.as_mut().ok_or_else(|| invalid("null output pointer"))?;
        *out = r.0.resolution().map_or(0, |res| res.degree());
        Ok(())
    })
}

/// Renders a result as a resolution file, or as `key=value` lines when
/// `structured` is set. Release the string with [`tp_string_free`].
///
/// # Safety
/// `result` is a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tp_result_emit(
    result: *const TpResult,
    structured: bool,
    out: *mut *mut c_char,
) -> TpStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| invalid("null result"))?;
        if out.is_null() {
            return Err(invalid("null output pointer"));
        }
        let s = if structured {
            emit_structured(&r.0)
        } else {
            emit_resolution(&r.0)
        };
        *out = to_c_string(s);
        Ok(())
    })
}

/// # Safety
/// `result` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tp_result_free(result: *mut TpResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Mixed volume of the supports in a system file with `simplices` copies
/// of the standard simplex appended.
///
/// # Safety
/// `system` is a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tp_mixed_volume(
    system: *const c_char,
    simplices: usize,
    out: *mut u64,
) -> TpStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| invalid("null output pointer"))?;
        let f = SystemFile::parse(read_text(system)?)?;
        *out = mixed_volume(&f.family.with_simplices(simplices))?;
        Ok(())
    })
}

/// Transcendence basis of the supports in a system file as 0-based
/// variable indices. `len` receives the basis size; when it exceeds
/// `capacity` nothing is written to `indices` and the call fails with
/// `TP_STATUS_INVALID_ARGUMENT`.
///
/// # Safety
/// `system` is a NUL-terminated string, `indices` has room for `capacity`
/// entries and `len` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tp_trans_basis(
    system: *const c_char,
    indices: *mut usize,
    capacity: usize,
    len: *mut usize,
) -> TpStatus {
    guard(|| {
        let len = len.as_mut().ok_or_else(|| invalid("null length pointer"))?;
        let f = SystemFile::parse(read_text(system)?)?;
        let tb = trans_basis(&f.family)?.indices;
        *len = tb.len();
        if tb.len() > capacity {
            return Err(invalid("index buffer too small"));
        }
        if !tb.is_empty() {
            if indices.is_null() {
                return Err(invalid("null index buffer"));
            }
            ptr::copy_nonoverlapping(tb.as_ptr(), indices, tb.len());
        }
        Ok(())
    })
}

/// Audits a resolution file against its system file. Returns
/// `TP_STATUS_OK` when every identity holds and `TP_STATUS_MATH_FAILURE`
/// otherwise; in both cases `report` (if not null) receives one
/// `name: pass|FAIL` line per identity.
///
/// # Safety
/// Both texts are NUL-terminated strings; `report` is null or valid.
#[no_mangle]
pub unsafe extern "C" fn tp_verify(
    system: *const c_char,
    resolution: *const c_char,
    report: *mut *mut c_char,
) -> TpStatus {
    guard(|| {
        let f = SystemFile::parse(read_text(system)?)?;
        let stored = parse_resolution(read_text(resolution)?)?;
        let rep = verify_result(&f.equations, &f.family, &stored)?;
        if !report.is_null() {
            *report = to_c_string(rep.to_string());
        }
        if rep.passed() {
            Ok(())
        } else {
            Err(Failure(
                TpStatus::MathFailure,
                format!("verification failed: {}", rep.failures().join(", ")),
            ))
        }
    })
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn tp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` is null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
