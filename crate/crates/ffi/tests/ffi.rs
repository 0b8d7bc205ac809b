use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use cclab_ffi::*;

fn owned(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { cclab_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cclab_last_error_message()) }.to_string_lossy().into_owned()
}

fn catalogue(key: &str) -> *mut CclabSystem {
    let key = CString::new(key).unwrap();
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { cclab_system_from_catalogue(key.as_ptr(), &mut sys) }, CclabStatus::Ok);
    assert!(!sys.is_null());
    sys
}

fn exact_r(sys: *const CclabSystem, x: &str, y: &str) -> Result<String, CclabStatus> {
    let (x, y) = (CString::new(x).unwrap(), CString::new(y).unwrap());
    let mut out = ptr::null_mut();
    match unsafe { cclab_curvature_at_exact(sys, x.as_ptr(), y.as_ptr(), &mut out) } {
        CclabStatus::Ok => Ok(owned(out)),
        s => Err(s),
    }
}

#[test]
fn exact_values_at_origin() {
    for (key, v) in [("s1", "-1"), ("s1a", "-80/289"), ("s2", "6/5"), ("center", "1")] {
        let sys = catalogue(key);
        assert_eq!(exact_r(sys, "0", "0").as_deref(), Ok(v));
        unsafe { cclab_system_free(sys) };
    }
}

#[test]
fn parse_and_float_evaluation() {
    let text = CString::new("vars: x y\ndx = -y + x^2\ndy = x + x*y\n").unwrap();
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { cclab_system_parse(text.as_ptr(), &mut sys) }, CclabStatus::Ok);
    let mut deg = 0i64;
    assert_eq!(unsafe { cclab_system_degree(sys, &mut deg) }, CclabStatus::Ok);
    assert_eq!(deg, 2);
    let mut r = 0.0;
    assert_eq!(unsafe { cclab_curvature_at(sys, 0.5, 0.25, &mut r) }, CclabStatus::Ok);
    // Closed form 1 / ((x^2 + 1)^2 (4 x^2 + (y + 1)^2)).
    let expect = 1.0 / (1.25f64.powi(2) * (1.0 + 1.5625));
    assert!((r - expect).abs() < 1e-15, "{r} vs {expect}");
    assert_eq!(unsafe { cclab_curvature_at(sys, 0.0, -1.0, &mut r) }, CclabStatus::NotFinite);
    assert!(last_error().contains("diverges"));
    assert_eq!(unsafe { cclab_curvature_at(sys, f64::NAN, 0.0, &mut r) }, CclabStatus::ParseError);
    unsafe { cclab_system_free(sys) };
}

#[test]
fn errors_are_reported_with_codes_and_messages() {
    let bad = CString::new("dx = x +* y\ndy = x\n").unwrap();
    let mut sys = ptr::null_mut();
    assert_eq!(unsafe { cclab_system_parse(bad.as_ptr(), &mut sys) }, CclabStatus::ParseError);
    assert!(sys.is_null());
    assert!(last_error().contains("byte"));

    let key = CString::new("s3").unwrap();
    assert_eq!(unsafe { cclab_system_from_catalogue(key.as_ptr(), &mut sys) }, CclabStatus::UnknownKey);
    assert_eq!(unsafe { cclab_system_parse(ptr::null(), &mut sys) }, CclabStatus::NullPointer);
    assert_eq!(unsafe { cclab_system_parse(bad.as_ptr(), ptr::null_mut()) }, CclabStatus::NullPointer);

    let invalid = [0xffu8, 0xfe, 0];
    assert_eq!(unsafe { cclab_system_parse(invalid.as_ptr().cast(), &mut sys) }, CclabStatus::InvalidUtf8);

    let s1 = catalogue("s1");
    assert_eq!(exact_r(s1, "1/0", "0"), Err(CclabStatus::ParseError));
    unsafe {
        cclab_system_free(s1);
        cclab_system_free(ptr::null_mut());
        cclab_string_free(ptr::null_mut());
    }
}

#[test]
fn analysis_json_and_threshold() {
    let sys = catalogue("s1a");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cclab_analyze_json(sys, 0.0, 0.0, 0, &mut out) }, CclabStatus::Ok);
    let json = owned(out);
    assert!(json.contains("\"assertion_a\": \"fails_R_negative\""));
    assert!(json.contains("\"cycle_count\": 2"));
    assert_eq!(unsafe { cclab_analyze_json(sys, 2.0, 1.0, 10, &mut out) }, CclabStatus::ParseError);
    unsafe { cclab_system_free(sys) };

    let mut k = 0u32;
    assert_eq!(unsafe { cclab_hilbert_threshold(&mut k) }, CclabStatus::Ok);
    assert_eq!(k, 35);
}

#[test]
fn paper_check_through_the_abi() {
    let mut out = ptr::null_mut();
    let mut pass = false;
    assert_eq!(unsafe { cclab_paper_check_json(&mut out, &mut pass) }, CclabStatus::Ok);
    assert!(pass);
    assert!(owned(out).contains("\"failed\": 0"));
}

#[test]
fn header_is_valid_c_and_cpp() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/cclab.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in ["cclab_system_parse", "cclab_analyze_json", "cclab_string_free", "CCLAB_STATUS_NOT_FINITE"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let Ok(status) = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang])
            .arg("-I")
            .arg(dir.join("include"))
            .arg(dir.join("examples/smoke.c"))
            .status()
        else {
            eprintln!("{compiler} not available; header syntax not checked");
            continue;
        };
        assert!(status.success(), "{compiler} rejected the header");
    }
}
