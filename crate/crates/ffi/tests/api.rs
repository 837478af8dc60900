use std::ffi::{CStr, CString};
use std::ptr;

use flatsol_ffi::*;

fn s(p: *const std::ffi::c_char) -> String {
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn take(p: *mut std::ffi::c_char) -> String {
    let out = s(p);
    unsafe { flatsol_string_free(p) };
    out
}

#[test]
fn klein_report_through_handles() {
    unsafe {
        let name = CString::new("klein9").unwrap();
        let mut endo = ptr::null_mut();
        assert_eq!(flatsol_endo_builtin(name.as_ptr(), &mut endo), FlatsolStatus::Ok);
        let mut dim = 0;
        assert_eq!(flatsol_endo_dimension(endo, &mut dim), FlatsolStatus::Ok);
        assert_eq!(dim, 2);

        let mut report = ptr::null_mut();
        assert_eq!(flatsol_report_compute(endo, &mut report), FlatsolStatus::Ok);
        let json = s(flatsol_report_json(report));
        assert!(json.contains("\"stable_homology\""));

        let graded = CString::new("unstable_homology").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(flatsol_report_graded(report, graded.as_ptr(), 1, &mut out), FlatsolStatus::Ok);
        assert_eq!(take(out), "Z[1/3] (+) Z/2");
        assert_eq!(flatsol_report_graded(report, graded.as_ptr(), 7, &mut out), FlatsolStatus::UnknownName);

        let mut failed = 99;
        assert_eq!(flatsol_report_failed_checks(report, &mut failed), FlatsolStatus::Ok);
        assert_eq!(failed, 0);

        assert_eq!(flatsol_periodic_points(endo, 1, &mut out), FlatsolStatus::InsufficientData);
        assert!(s(flatsol_last_error()).contains("insufficient data"));

        flatsol_report_free(report);
        flatsol_endo_free(endo);
    }
}

#[test]
fn endo_from_toml_and_periodic_points() {
    unsafe {
        let def = CString::new("manifold = \"S1\"\ndegree = 2\ntop_sign = 1\ninduced_homology = [[[1]], [[2]]]\n").unwrap();
        let mut endo = ptr::null_mut();
        assert_eq!(flatsol_endo_from_toml(def.as_ptr(), &mut endo), FlatsolStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(flatsol_periodic_points(endo, 10, &mut out), FlatsolStatus::Ok);
        assert_eq!(take(out), "1023");
        flatsol_endo_free(endo);

        let bad = CString::new("manifold = \"S1\"\ndegree = 2\ninduced_homology = [[[1]], [[3]]]\n").unwrap();
        assert_eq!(flatsol_endo_from_toml(bad.as_ptr(), &mut endo), FlatsolStatus::Invalid);
        let garbage = CString::new("degree = [").unwrap();
        assert_eq!(flatsol_endo_from_toml(garbage.as_ptr(), &mut endo), FlatsolStatus::Parse);
    }
}

#[test]
fn errors_and_null_handling() {
    unsafe {
        let mut endo = ptr::null_mut();
        let unknown = CString::new("sphere7").unwrap();
        assert_eq!(flatsol_endo_builtin(unknown.as_ptr(), &mut endo), FlatsolStatus::UnknownName);
        assert!(endo.is_null());
        assert_eq!(flatsol_endo_builtin(ptr::null(), &mut endo), FlatsolStatus::NullPointer);
        assert_eq!(flatsol_endo_builtin(unknown.as_ptr(), ptr::null_mut()), FlatsolStatus::UnknownName);
        let mut dim = 0;
        assert_eq!(flatsol_endo_dimension(ptr::null(), &mut dim), FlatsolStatus::NullPointer);
        assert!(flatsol_report_json(ptr::null()).is_null());
        flatsol_endo_free(ptr::null_mut());
        flatsol_report_free(ptr::null_mut());
        flatsol_string_free(ptr::null_mut());
        let bytes = [0xffu8, 0];
        assert_eq!(flatsol_canonicalize_group(bytes.as_ptr().cast(), &mut ptr::null_mut()), FlatsolStatus::InvalidUtf8);
        assert!(!s(flatsol_version()).is_empty());
    }
}

#[test]
fn canonical_group_strings() {
    for (input, expected) in [("Z/6 (+) Z/4", "Z/2 (+) Z/12"), ("Z/2 (+) Z[1/9]", "Z[1/3] (+) Z/2"), ("Z^2 (+) Z/1", "Z^2")] {
        let c = CString::new(input).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { flatsol_canonicalize_group(c.as_ptr(), &mut out) }, FlatsolStatus::Ok, "{input}");
        assert_eq!(take(out), expected);
    }
    let c = CString::new("Q/Z").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { flatsol_canonicalize_group(c.as_ptr(), &mut out) }, FlatsolStatus::Parse);
}
