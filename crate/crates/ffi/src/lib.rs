//! C ABI for `cclab`.
//!
//! Systems are passed around as opaque `CclabSystem` handles. Every fallible call returns a
//! `CclabStatus`; on failure a message is available from `cclab_last_error_message` on the
//! same thread until the next failing call. Strings returned through out-parameters are
//! owned by the caller and must be released with `cclab_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cclab::algebra::rational::{fmt_rational, from_f64, parse_rational, to_f64};
use cclab::catalogue::{Catalogue, CatalogueKey};
use cclab::curvature::{curvature, ROutcome};
use cclab::hilbert::contradiction_threshold;
use cclab::paper_check::paper_check;
use cclab::parser::{parse_system, parse_system_file};
use cclab::report::{analyze, to_canonical_json, ScanConfig};
use cclab::{PlanarSystem, Rational};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CclabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    UnknownKey = 4,
    /// `R` is not a finite value at the requested point.
    NotFinite = 5,
    AnalysisFailed = 6,
    DataUnavailable = 7,
    /// A Rust panic was caught at the boundary.
    Internal = 8,
}

/// Opaque handle to a parsed planar system.
pub struct CclabSystem {
    inner: PlanarSystem,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).unwrap_or_default());
}

fn fail(status: CclabStatus, msg: impl Into<String>) -> CclabStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning panics into `Internal`.
fn guard(f: impl FnOnce() -> CclabStatus) -> CclabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(CclabStatus::Internal, "internal error (panic caught at the C boundary)"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, CclabStatus> {
    if p.is_null() {
        return Err(fail(CclabStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(CclabStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> CclabStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            CclabStatus::Ok
        }
        Err(_) => fail(CclabStatus::Internal, "output contains a NUL byte"),
    }
}

unsafe fn write_handle(out: *mut *mut CclabSystem, sys: PlanarSystem) -> CclabStatus {
    *out = Box::into_raw(Box::new(CclabSystem { inner: sys }));
    CclabStatus::Ok
}

/// Message of the last failing call on this thread; empty if none. The pointer stays valid
/// until the next failing call on the same thread and must not be freed.
#[no_mangle]
pub extern "C" fn cclab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a system definition (`vars: x y`, `dx = ...`, `dy = ...`).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cclab_system_parse(text: *const c_char, out: *mut *mut CclabSystem) -> CclabStatus {
    guard(|| {
        if out.is_null() {
            return fail(CclabStatus::NullPointer, "null output pointer");
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_system_file(text).and_then(|src| parse_system(&src)) {
            Ok(sys) => write_handle(out, sys),
            Err(d) => fail(CclabStatus::ParseError, d.to_string()),
        }
    })
}

/// Loads a built-in system by key (`s1`, `s1a`, `s2`, `center`).
///
/// # Safety
/// `key` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cclab_system_from_catalogue(key: *const c_char, out: *mut *mut CclabSystem) -> CclabStatus {
    guard(|| {
        if out.is_null() {
            return fail(CclabStatus::NullPointer, "null output pointer");
        }
        let key: CatalogueKey = match read_str(key).map(str::parse) {
            Ok(Ok(k)) => k,
            Ok(Err(e)) => return fail(CclabStatus::UnknownKey, e.to_string()),
            Err(s) => return s,
        };
        match Catalogue::load().and_then(|c| c.system(key)) {
            Ok(sys) => write_handle(out, sys),
            Err(e) => fail(CclabStatus::DataUnavailable, e.to_string()),
        }
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `sys` must be null or a handle obtained from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cclab_system_free(sys: *mut CclabSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Total degree of the system.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cclab_system_degree(sys: *const CclabSystem, out: *mut i64) -> CclabStatus {
    if sys.is_null() || out.is_null() {
        return fail(CclabStatus::NullPointer, "null argument");
    }
    *out = (*sys).inner.degree();
    CclabStatus::Ok
}

fn curvature_outcome(sys: &PlanarSystem, pt: &[Rational; 2]) -> Result<Rational, CclabStatus> {
    let c = curvature(sys).map_err(|e| fail(CclabStatus::AnalysisFailed, e.to_string()))?;
    match c.evaluate(pt) {
        ROutcome::Value(v) => Ok(v),
        ROutcome::SingularDenominator => Err(fail(CclabStatus::NotFinite, "|R| diverges at the point")),
        ROutcome::Indeterminate => Err(fail(CclabStatus::NotFinite, "R is indeterminate (0/0) at the point")),
    }
}

/// Exact `R` at a rational point given as strings (`"3"`, `"-1/4"`); the value is written as
/// a newly allocated string `"p/q"`.
///
/// # Safety
/// `x`, `y` must be NUL-terminated strings, `sys` a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cclab_curvature_at_exact(
    sys: *const CclabSystem,
    x: *const c_char,
    y: *const c_char,
    out: *mut *mut c_char,
) -> CclabStatus {
    guard(|| {
        if sys.is_null() || out.is_null() {
            return fail(CclabStatus::NullPointer, "null argument");
        }
        let coord = |p| -> Result<Rational, CclabStatus> {
            let s = read_str(p)?;
            parse_rational(s).ok_or_else(|| fail(CclabStatus::ParseError, format!("`{s}` is not a rational")))
        };
        let pt = match (coord(x), coord(y)) {
            (Ok(a), Ok(b)) => [a, b],
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match curvature_outcome(&(*sys).inner, &pt) {
            Ok(v) => write_string(out, fmt_rational(&v)),
            Err(s) => s,
        }
    })
}

/// `R` at a floating-point location, evaluated exactly at the binary value of `(x, y)` and
/// rounded to the nearest double.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cclab_curvature_at(sys: *const CclabSystem, x: f64, y: f64, out: *mut f64) -> CclabStatus {
    guard(|| {
        if sys.is_null() || out.is_null() {
            return fail(CclabStatus::NullPointer, "null argument");
        }
        let (Some(a), Some(b)) = (from_f64(x), from_f64(y)) else {
            return fail(CclabStatus::ParseError, "coordinates must be finite");
        };
        match curvature_outcome(&(*sys).inner, &[a, b]) {
            Ok(v) => {
                *out = to_f64(&v);
                CclabStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Full analysis as canonical JSON. `n_scan` of 0 selects the default scan.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cclab_analyze_json(
    sys: *const CclabSystem,
    r_min: f64,
    r_max: f64,
    n_scan: usize,
    out: *mut *mut c_char,
) -> CclabStatus {
    guard(|| {
        if sys.is_null() || out.is_null() {
            return fail(CclabStatus::NullPointer, "null argument");
        }
        let cfg = if n_scan == 0 {
            ScanConfig::default()
        } else {
            if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) || n_scan < 2 {
                return fail(CclabStatus::ParseError, "scan needs 0 < r_min < r_max and n_scan >= 2");
            }
            ScanConfig { r_range: (r_min, r_max), n_scan }
        };
        let report = match analyze(&(*sys).inner, Some(cfg)) {
            Ok(r) => r,
            Err(e) => return fail(CclabStatus::AnalysisFailed, e.to_string()),
        };
        match to_canonical_json(&report) {
            Ok(s) => write_string(out, s),
            Err(e) => fail(CclabStatus::Internal, e.to_string()),
        }
    })
}

/// Minimal `k` for which the exact sum exceeds the claimed Hilbert-number value.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cclab_hilbert_threshold(out: *mut u32) -> CclabStatus {
    guard(|| {
        if out.is_null() {
            return fail(CclabStatus::NullPointer, "null output pointer");
        }
        match contradiction_threshold() {
            Ok(k) => {
                *out = k;
                CclabStatus::Ok
            }
            Err(e) => fail(CclabStatus::AnalysisFailed, e.to_string()),
        }
    })
}

/// Runs the catalogue regression; writes canonical JSON and whether every check passed.
///
/// # Safety
/// `out` and `all_pass` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cclab_paper_check_json(out: *mut *mut c_char, all_pass: *mut bool) -> CclabStatus {
    guard(|| {
        if out.is_null() || all_pass.is_null() {
            return fail(CclabStatus::NullPointer, "null output pointer");
        }
        let cat = match Catalogue::load() {
            Ok(c) => c,
            Err(e) => return fail(CclabStatus::DataUnavailable, e.to_string()),
        };
        let report = paper_check(&cat);
        *all_pass = report.all_pass();
        match to_canonical_json(&report) {
            Ok(s) => write_string(out, s),
            Err(e) => fail(CclabStatus::Internal, e.to_string()),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string obtained from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cclab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
