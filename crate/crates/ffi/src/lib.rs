//! C interface to `flatsol`.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `_free` function. Strings returned through `out`
//! parameters are NUL-terminated and released with `flatsol_string_free`.
//! After any non-`OK` status, `flatsol_last_error` describes the failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use flatsol::abelian::FgAbGroup;
use flatsol::endomorphisms::{builtin, EndoError, ExpandingEndo};
use flatsol::files::{parse_endo, FileError};
use flatsol::invariants::{compute_report, periodic_points, run_checks, InvariantError, Status};
use flatsol::limits::LimitSummary;
use flatsol::report::{ReportDocument, ReportError};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlatsolStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Invalid = 4,
    UnknownName = 5,
    InsufficientData = 6,
    Panic = 7,
}

/// An expanding endomorphism of a flat manifold.
pub struct FlatsolEndo(ExpandingEndo);

/// A computed invariant report with its checks.
pub struct FlatsolReport {
    doc: ReportDocument,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

struct Failure(FlatsolStatus, String);

impl Failure {
    fn new(status: FlatsolStatus, msg: impl ToString) -> Self {
        Failure(status, msg.to_string())
    }
}

impl From<EndoError> for Failure {
    fn from(e: EndoError) -> Self {
        let s = match e {
            EndoError::UnknownBuiltin(_) => FlatsolStatus::UnknownName,
            _ => FlatsolStatus::Invalid,
        };
        Failure::new(s, e)
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        let s = match e {
            FileError::Toml(_) | FileError::Abelian(_) => FlatsolStatus::Parse,
            FileError::Manifold(flatsol::manifolds::ManifoldError::UnknownName(_)) => FlatsolStatus::UnknownName,
            _ => FlatsolStatus::Invalid,
        };
        Failure::new(s, e)
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Self {
        let s = match e {
            InvariantError::InsufficientData(_) => FlatsolStatus::InsufficientData,
            _ => FlatsolStatus::Invalid,
        };
        Failure::new(s, e)
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        Failure::new(FlatsolStatus::Invalid, e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FlatsolStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FlatsolStatus::Ok,
        Ok(Err(Failure(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            FlatsolStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(FlatsolStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure::new(FlatsolStatus::InvalidUtf8, e))
}

unsafe fn nonnull<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::new(FlatsolStatus::NullPointer, "null handle"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(FlatsolStatus::NullPointer, "null output pointer"));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior NUL").into_raw()
}

/// Message for the most recent failure on this thread. Valid until the next
/// failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn flatsol_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn flatsol_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Looks up a builtin endomorphism such as `"klein9"`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn flatsol_endo_builtin(name: *const c_char, out: *mut *mut FlatsolEndo) -> FlatsolStatus {
    guard(|| {
        let e = builtin(text(name)?)?;
        write_out(out, Box::into_raw(Box::new(FlatsolEndo(e))))
    })
}

/// Parses and validates an endomorphism definition in TOML.
///
/// # Safety
/// `definition` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn flatsol_endo_from_toml(definition: *const c_char, out: *mut *mut FlatsolEndo) -> FlatsolStatus {
    guard(|| {
        let e = parse_endo(text(definition)?, None)?;
        write_out(out, Box::into_raw(Box::new(FlatsolEndo(e))))
    })
}

/// # Safety
/// `endo` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn flatsol_endo_free(endo: *mut FlatsolEndo) {
    if !endo.is_null() {
        drop(Box::from_raw(endo));
    }
}

/// Dimension of the underlying manifold.
///
/// # Safety
/// `endo` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn flatsol_endo_dimension(endo: *const FlatsolEndo, out: *mut usize) -> FlatsolStatus {
    guard(|| write_out(out, nonnull(endo)?.0.dim()))
}

/// Computes the invariant report and runs all checks.
///
/// # Safety
/// `endo` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn flatsol_report_compute(endo: *const FlatsolEndo, out: *mut *mut FlatsolReport) -> FlatsolStatus {
    guard(|| {
        let e = &nonnull(endo)?.0;
        let r = compute_report(e)?;
        let checks = run_checks(e, &r, e.manifold.orientable && e.dim() <= 3);
        let doc = ReportDocument::new(&r, &checks)?;
        let json = CString::new(doc.to_json()).expect("no interior NUL");
        write_out(out, Box::into_raw(Box::new(FlatsolReport { doc, json })))
    })
}

/// # Safety
/// `report` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn flatsol_report_free(report: *mut FlatsolReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// The report as a JSON document, borrowed from the handle.
///
/// # Safety
/// `report` must be a live handle; the result lives as long as it does.
#[no_mangle]
pub unsafe extern "C" fn flatsol_report_json(report: *const FlatsolReport) -> *const c_char {
    match report.as_ref() {
        Some(r) => r.json.as_ptr(),
        None => ptr::null(),
    }
}

/// Number of checks with status `fail`.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn flatsol_report_failed_checks(report: *const FlatsolReport, out: *mut usize) -> FlatsolStatus {
    guard(|| {
        let n = nonnull(report)?.doc.checks.iter().filter(|c| c.status == Status::Fail).count();
        write_out(out, n)
    })
}

/// Canonical form of one graded entry, e.g. `("stable_homology", 0)`.
///
/// # Safety
/// `report` must be a live handle, `graded` a NUL-terminated string and
/// `out` a valid pointer. Release the result with `flatsol_string_free`.
#[no_mangle]
pub unsafe extern "C" fn flatsol_report_graded(
    report: *const FlatsolReport,
    graded: *const c_char,
    degree: usize,
    out: *mut *mut c_char,
) -> FlatsolStatus {
    guard(|| {
        let r = nonnull(report)?;
        let name = text(graded)?;
        let entry = r
            .doc
            .gradeds
            .get(name)
            .and_then(|m| m.get(&degree.to_string()))
            .ok_or_else(|| Failure::new(FlatsolStatus::UnknownName, format!("no entry {name}[{degree}]")))?;
        write_out(out, owned_string(entry.clone()))
    })
}

/// `|Per_k|` as a decimal string.
///
/// # Safety
/// `endo` must be a live handle and `out` a valid pointer. Release the
/// result with `flatsol_string_free`.
#[no_mangle]
pub unsafe extern "C" fn flatsol_periodic_points(endo: *const FlatsolEndo, k: u32, out: *mut *mut c_char) -> FlatsolStatus {
    guard(|| {
        let e = &nonnull(endo)?.0;
        let p = periodic_points(e, k)?;
        write_out(out, owned_string(p.value.to_string()))
    })
}

/// Canonical rendering of a group or limit group string such as
/// `"Z/6 (+) Z/4"` or `"Z[1/9] (+) Z/2"`.
///
/// # Safety
/// `group` must be a NUL-terminated string and `out` a valid pointer.
/// Release the result with `flatsol_string_free`.
#[no_mangle]
pub unsafe extern "C" fn flatsol_canonicalize_group(group: *const c_char, out: *mut *mut c_char) -> FlatsolStatus {
    guard(|| {
        let s = text(group)?;
        let canonical = match s.parse::<FgAbGroup>() {
            Ok(g) => g.to_string(),
            Err(_) => s.parse::<LimitSummary>().map_err(|e| Failure::new(FlatsolStatus::Parse, e))?.to_string(),
        };
        write_out(out, owned_string(canonical))
    })
}

/// # Safety
/// `s` must be a string returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn flatsol_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
