use std::ffi::{CStr, CString};
use std::ptr;

use compack_ffi::*;

const ETA: [u32; 6] = [0, 0, 0, 1, 1, 3];
const ZETA: [u32; 6] = [1, 0, 3, 0, 2, 0];

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { compack_string_free(s) };
    out
}

fn last_error() -> String {
    let p = compack_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn enumerate_s_two_calls() {
    let mut n = 0usize;
    assert_eq!(unsafe { compack_enumerate_s(ptr::null_mut(), 0, &mut n) }, CompackStatus::Ok);
    assert_eq!(n, 55);
    let mut small = vec![0u32; 6];
    assert_eq!(unsafe { compack_enumerate_s(small.as_mut_ptr(), 1, &mut n) }, CompackStatus::BufferTooSmall);
    let mut buf = vec![0u32; n * 6];
    assert_eq!(unsafe { compack_enumerate_s(buf.as_mut_ptr(), n, &mut n) }, CompackStatus::Ok);
    assert!(buf.chunks(6).any(|c| c == [0, 0, 0, 2, 2, 0]));
}

#[test]
fn k_count_and_bad_scope() {
    let mut n = 0usize;
    let scope = CString::new("capped").unwrap();
    assert_eq!(unsafe { compack_enumerate_k_count(scope.as_ptr(), &mut n) }, CompackStatus::Ok);
    assert_eq!(n, 248395);
    let bad = CString::new("nope").unwrap();
    assert_eq!(unsafe { compack_enumerate_k_count(bad.as_ptr(), &mut n) }, CompackStatus::Parse);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { compack_enumerate_k_count(ptr::null(), &mut n) }, CompackStatus::NullPointer);
}

#[test]
fn intercept_first_example() {
    let mut st = CompackInterceptStatus::None;
    let (mut r, mut s) = (ptr::null_mut(), ptr::null_mut());
    let code = unsafe { compack_intercept(ETA.as_ptr(), ZETA.as_ptr(), 40, &mut st, &mut r, &mut s) };
    assert_eq!(code, CompackStatus::Ok);
    assert_eq!(st, CompackInterceptStatus::Found);
    let r: f64 = take(r).parse().unwrap();
    let s: f64 = take(s).parse().unwrap();
    assert!((r - 0.438405).abs() < 1e-6 && (s - 0.299248).abs() < 1e-6);
}

#[test]
fn gamma_handle() {
    let mut st = CompackInterceptStatus::None;
    let (mut r, mut s) = (ptr::null_mut(), ptr::null_mut());
    unsafe { compack_intercept(ETA.as_ptr(), ZETA.as_ptr(), 40, &mut st, &mut r, &mut s) };
    let r = CString::new(take(r)).unwrap();
    let s = CString::new(take(s)).unwrap();
    let mut h = ptr::null_mut();
    let code = unsafe { compack_gamma_search(r.as_ptr(), s.as_ptr(), 40, 0, &mut h) };
    assert_eq!(code, CompackStatus::Ok, "{}", last_error());
    unsafe {
        assert_eq!(compack_gamma_outcome(h), CompackGammaOutcome::Found);
        assert!(compack_gamma_nodes(h) > 0);
        let n = compack_gamma_count(h);
        let mut xi = [0u32; 6];
        let found = (0..n).any(|i| {
            assert_eq!(compack_gamma_get(h, i, xi.as_mut_ptr()), CompackStatus::Ok);
            xi == [0, 0, 2, 4, 0, 4]
        });
        assert!(found);
        assert_eq!(compack_gamma_get(h, n, xi.as_mut_ptr()), CompackStatus::Usage);
        compack_gamma_free(h);
        assert_eq!(compack_gamma_search(r.as_ptr(), s.as_ptr(), 40, 1, &mut h), CompackStatus::Ok);
        assert_eq!(compack_gamma_outcome(h), CompackGammaOutcome::BudgetExceeded);
        compack_gamma_free(h);
    }
}

#[test]
fn bad_decimal_is_parse_error() {
    let r = CString::new("zero point four").unwrap();
    let s = CString::new("0.3").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { compack_gamma_search(r.as_ptr(), s.as_ptr(), 40, 0, &mut h) }, CompackStatus::Parse);
    assert!(h.is_null());
}

#[test]
fn grow_verify_roundtrip() {
    let mut p = ptr::null_mut();
    let mut stalled = -1;
    let code = unsafe { compack_grow(ETA.as_ptr(), ZETA.as_ptr(), 40, 2.0, &mut p, &mut stalled) };
    assert_eq!(code, CompackStatus::Ok, "{}", last_error());
    assert_eq!(stalled, 0);
    unsafe {
        let n = compack_packing_len(p);
        assert!(n > 10);
        let mut rep = CompackVerifyReport::default();
        assert_eq!(compack_packing_verify(p, 1e-9, &mut rep), CompackStatus::Ok);
        assert_eq!(rep.violations, 0);
        assert_eq!(rep.circles, n);
        assert_eq!(rep.interior, rep.interior_compact);

        let mut js = ptr::null_mut();
        assert_eq!(compack_packing_to_json(p, 40, &mut js), CompackStatus::Ok);
        let js = CString::new(take(js)).unwrap();
        let mut q = ptr::null_mut();
        assert_eq!(compack_packing_from_json(js.as_ptr(), 40, &mut q), CompackStatus::Ok);
        assert_eq!(compack_packing_len(q), n);

        let mut svg = ptr::null_mut();
        assert_eq!(compack_packing_render_svg(q, 50.0, 1, &mut svg), CompackStatus::Ok);
        let svg = take(svg);
        assert_eq!(svg.matches("<circle").count(), n);

        compack_packing_free(q);
        compack_packing_free(p);
        compack_packing_free(ptr::null_mut());
    }
}

#[test]
fn invalid_json() {
    let js = CString::new("{").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { compack_packing_from_json(js.as_ptr(), 40, &mut p) }, CompackStatus::Parse);
    assert!(p.is_null());
}

#[test]
fn header_is_generated() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/compack.h")).unwrap();
    for f in ["compack_enumerate_s", "compack_grow", "compack_packing_free", "compack_last_error", "COMPACK_STATUS_PANIC"] {
        assert!(h.contains(f), "{f}");
    }
}
