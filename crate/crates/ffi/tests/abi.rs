use std::ffi::{CStr, CString};
use std::ptr;

use blowup8_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut libc::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    b8_string_free(p);
    s
}

unsafe fn last_error() -> String {
    let p = b8_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

unsafe fn divisor(s: &str) -> *mut B8Divisor {
    let mut d = ptr::null_mut();
    assert_eq!(b8_divisor_parse(cstr(s).as_ptr(), &mut d), B8Status::B8_OK);
    d
}

#[test]
fn parse_print_and_pair() {
    unsafe {
        let d = divisor("3;2,1,1,1,1,1,1,1");
        let mut s = ptr::null_mut();
        assert_eq!(b8_divisor_to_string(d, &mut s), B8Status::B8_OK);
        assert_eq!(take_string(s), "3;2,1,1,1,1,1,1,1");
        assert_eq!(b8_pairing(d, d, &mut s), B8Status::B8_OK);
        assert_eq!(take_string(s), "7");
        b8_divisor_free(d);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut d = ptr::null_mut();
        assert_eq!(b8_divisor_parse(cstr("3;2,1").as_ptr(), &mut d), B8Status::B8_PARSE_ERROR);
        assert!(d.is_null());
        assert!(last_error().contains("3;2,1"));
        assert_eq!(b8_divisor_parse(ptr::null(), &mut d), B8Status::B8_NULL_POINTER);
        assert_eq!(b8_is_nef(ptr::null(), ptr::null_mut()), B8Status::B8_NULL_POINTER);
        b8_divisor_free(ptr::null_mut());
        b8_string_free(ptr::null_mut());
        b8_certificate_free(ptr::null_mut());
    }
}

#[test]
fn reduction_through_handles() {
    unsafe {
        let d = divisor("3;2,2,2,2,1,1,1,0");
        let (mut std_form, mut word, mut steps) = (ptr::null_mut(), ptr::null_mut(), 0usize);
        assert_eq!(b8_reduce(d, 100_000, &mut std_form, &mut word, &mut steps), B8Status::B8_OK);
        assert_eq!(steps, 2);
        assert!(!take_string(word).is_empty());
        let mut s = ptr::null_mut();
        b8_divisor_to_string(std_form, &mut s);
        assert_eq!(take_string(s), "0;0,0,0,0,0,0,0,-1");
        let mut yes = false;
        assert_eq!(b8_is_minus_one_divisor(d, 100_000, &mut yes), B8Status::B8_OK);
        assert!(yes);
        b8_divisor_free(std_form);
        b8_divisor_free(d);

        let minus_h = divisor("-1;0,0,0,0,0,0,0,0");
        let mut out = ptr::null_mut();
        assert_eq!(b8_reduce(minus_h, 20, &mut out, ptr::null_mut(), ptr::null_mut()), B8Status::B8_STEP_LIMIT);
        b8_divisor_free(minus_h);
    }
}

#[test]
fn certificates_round_trip() {
    unsafe {
        let d = divisor("2;1,1,1,1,1,1,1,0");
        let mut c = ptr::null_mut();
        assert_eq!(b8_decompose(d, B8Cone::B8_CONE_EFFECTIVE, 100_000, &mut c), B8Status::B8_OK);
        let mut n = 0;
        b8_certificate_len(c, &mut n);
        assert_eq!(n, 2);
        let mut json = ptr::null_mut();
        assert_eq!(b8_certificate_to_json(c, &mut json), B8Status::B8_OK);
        let json = take_string(json);
        b8_certificate_free(c);

        let mut back = ptr::null_mut();
        assert_eq!(b8_certificate_from_json(cstr(&json).as_ptr(), &mut back), B8Status::B8_OK);
        assert_eq!(b8_certificate_check(back), B8Status::B8_OK);
        b8_certificate_free(back);

        let forged = json.replace("\"coeff\":\"1\"}]", "\"coeff\":\"5\"}]");
        let mut bad = ptr::null_mut();
        assert_eq!(b8_certificate_from_json(cstr(&forged).as_ptr(), &mut bad), B8Status::B8_OK);
        assert_eq!(b8_certificate_check(bad), B8Status::B8_INVALID_CERTIFICATE);
        b8_certificate_free(bad);

        b8_divisor_free(d);

        let d = divisor("1;1,1,0,0,0,0,0,0");
        let mut nef = true;
        b8_is_nef(d, &mut nef);
        assert!(!nef);
        let mut c = ptr::null_mut();
        assert_eq!(b8_decompose(d, B8Cone::B8_CONE_NEF, 100_000, &mut c), B8Status::B8_NOT_IN_CONE);
        assert!(c.is_null());
        assert!(last_error().contains("not nef"));
        b8_divisor_free(d);

        assert_eq!(b8_decompose_curve(cstr("1;0,0,0,0,0,0,0,0").as_ptr(), &mut c), B8Status::B8_OK);
        b8_certificate_len(c, &mut n);
        assert_eq!(n, 3);
        b8_certificate_free(c);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(b8_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
