//! C ABI over `blowup8`.
//!
//! Classes cross the boundary either as text (`"d;m1,...,m8"`) or as opaque
//! handles. Every function returns a [`B8Status`]; on anything other than
//! `B8_OK` a description is available from [`b8_last_error_message`] on the
//! same thread. Strings handed out by this library are freed with
//! [`b8_string_free`], handles with their own `*_free` function.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::c_char;

use blowup8::cones::{
    curve_decompose, effective_decompose, is_nef, movable_decompose, nef_decompose, AnyCertificate,
};
use blowup8::lattice::{pairing, CurveClass, DivisorClass};
use blowup8::weyl::{is_minus_one_divisor, to_standard_form};
use blowup8::Error;

/// Result codes shared by every entry point.
#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum B8Status {
    B8_OK = 0,
    B8_NULL_POINTER = 1,
    B8_INVALID_UTF8 = 2,
    B8_PARSE_ERROR = 3,
    /// The class is not in the requested cone. Not a failure of the call.
    B8_NOT_IN_CONE = 4,
    B8_STEP_LIMIT = 5,
    B8_SCALE_EXCEEDED = 6,
    B8_INVALID_CERTIFICATE = 7,
    B8_INVALID_ARGUMENT = 8,
    /// A panic was caught at the boundary.
    B8_INTERNAL = 9,
}

#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum B8Cone {
    B8_CONE_NEF = 0,
    B8_CONE_EFFECTIVE = 1,
    B8_CONE_MOVABLE = 2,
}

/// Opaque divisor class.
pub struct B8Divisor(DivisorClass);

/// Opaque decomposition certificate.
pub struct B8Certificate(AnyCertificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> B8Status {
    match e {
        Error::Parse { .. } => B8Status::B8_PARSE_ERROR,
        Error::NotNef { .. } | Error::NotEffective { .. } | Error::NotMovable { .. } | Error::HypothesisViolated { .. } => {
            B8Status::B8_NOT_IN_CONE
        }
        Error::StepLimitExceeded { .. } => B8Status::B8_STEP_LIMIT,
        Error::ScaleExceeded(_) => B8Status::B8_SCALE_EXCEEDED,
        Error::InvalidCertificate(_) => B8Status::B8_INVALID_CERTIFICATE,
        _ => B8Status::B8_INVALID_ARGUMENT,
    }
}

fn fail(e: Error) -> B8Status {
    set_error(e.to_string());
    status_of(&e)
}

/// Runs `f` with panics turned into `B8_INTERNAL`.
fn guard(f: impl FnOnce() -> B8Status) -> B8Status {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            B8Status::B8_INTERNAL
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, B8Status> {
    if s.is_null() {
        set_error("null string argument");
        return Err(B8Status::B8_NULL_POINTER);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        B8Status::B8_INVALID_UTF8
    })
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> B8Status {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            B8Status::B8_OK
        }
        Err(_) => {
            set_error("string contains an interior NUL");
            B8Status::B8_INTERNAL
        }
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            set_error(concat!("null pointer: ", stringify!($p)));
            return B8Status::B8_NULL_POINTER;
        })+
    };
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Message describing the last failed call on this thread, or NULL. The
/// pointer stays valid until the next call into this library.
#[no_mangle]
pub extern "C" fn b8_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn b8_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn b8_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `"d;m1,...,m8"` into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn b8_divisor_parse(text: *const c_char, out: *mut *mut B8Divisor) -> B8Status {
    guard(|| {
        non_null!(out);
        let s = try_status!(read_str(text));
        match s.parse::<DivisorClass>() {
            Ok(d) => {
                *out = Box::into_raw(Box::new(B8Divisor(d)));
                B8Status::B8_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `d` must be NULL or a handle from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn b8_divisor_free(d: *mut B8Divisor) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Canonical text form of `d`; free with [`b8_string_free`].
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn b8_divisor_to_string(d: *const B8Divisor, out: *mut *mut c_char) -> B8Status {
    guard(|| {
        non_null!(d, out);
        write_string(out, (*d).0.to_string())
    })
}

/// Intersection pairing `(a, b)` as an exact rational string.
///
/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn b8_pairing(a: *const B8Divisor, b: *const B8Divisor, out: *mut *mut c_char) -> B8Status {
    guard(|| {
        non_null!(a, b, out);
        write_string(out, pairing(&(*a).0, &(*b).0).to_string())
    })
}

/// Reduces `d` to standard form. `out_standard` receives a new handle,
/// `out_word` the comma-separated Weyl word, `out_steps` the number of
/// Cremona steps. `out_word` and `out_steps` may be NULL.
///
/// # Safety
/// `d` must be a live handle; non-NULL out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn b8_reduce(
    d: *const B8Divisor,
    max_steps: usize,
    out_standard: *mut *mut B8Divisor,
    out_word: *mut *mut c_char,
    out_steps: *mut usize,
) -> B8Status {
    guard(|| {
        non_null!(d, out_standard);
        match to_standard_form(&(*d).0, max_steps) {
            Ok(r) => {
                if !out_word.is_null() {
                    let s = write_string(out_word, r.word.to_string());
                    if s != B8Status::B8_OK {
                        return s;
                    }
                }
                if !out_steps.is_null() {
                    *out_steps = r.steps;
                }
                *out_standard = Box::into_raw(Box::new(B8Divisor(r.standard)));
                B8Status::B8_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn b8_is_nef(d: *const B8Divisor, out: *mut bool) -> B8Status {
    guard(|| {
        non_null!(d, out);
        *out = is_nef(&(*d).0).holds();
        B8Status::B8_OK
    })
}

/// Whether `d` lies in the Weyl orbit of `E_8`.
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn b8_is_minus_one_divisor(d: *const B8Divisor, max_steps: usize, out: *mut bool) -> B8Status {
    guard(|| {
        non_null!(d, out);
        match is_minus_one_divisor(&(*d).0, max_steps) {
            Ok(w) => {
                *out = w.is_some();
                B8Status::B8_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Decomposes `d` over the generators of `cone`. Returns `B8_NOT_IN_CONE`
/// (with the reason in the last error message) when `d` is outside it.
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn b8_decompose(
    d: *const B8Divisor,
    cone: B8Cone,
    max_steps: usize,
    out: *mut *mut B8Certificate,
) -> B8Status {
    guard(|| {
        non_null!(d, out);
        let d = &(*d).0;
        let r = match cone {
            B8Cone::B8_CONE_NEF => nef_decompose(d),
            B8Cone::B8_CONE_EFFECTIVE => effective_decompose(d, max_steps),
            B8Cone::B8_CONE_MOVABLE => movable_decompose(d, max_steps),
        };
        match r {
            Ok(c) => {
                *out = Box::into_raw(Box::new(B8Certificate(c.into())));
                B8Status::B8_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Decomposes the curve class `"a;c1,...,c8"` over `e_i` and `l_ij`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn b8_decompose_curve(text: *const c_char, out: *mut *mut B8Certificate) -> B8Status {
    guard(|| {
        non_null!(out);
        let s = try_status!(read_str(text));
        match s.parse::<CurveClass>().and_then(|k| curve_decompose(&k)) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(B8Certificate(c.into())));
                B8Status::B8_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// Reads a certificate from its JSON form without checking it.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn b8_certificate_from_json(json: *const c_char, out: *mut *mut B8Certificate) -> B8Status {
    guard(|| {
        non_null!(out);
        let s = try_status!(read_str(json));
        match AnyCertificate::from_json(s) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(B8Certificate(c)));
                B8Status::B8_OK
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn b8_certificate_to_json(c: *const B8Certificate, out: *mut *mut c_char) -> B8Status {
    guard(|| {
        non_null!(c, out);
        write_string(out, (*c).0.to_json())
    })
}

/// Re-sums the certificate exactly. `B8_OK` when valid,
/// `B8_INVALID_CERTIFICATE` otherwise.
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn b8_certificate_check(c: *const B8Certificate) -> B8Status {
    guard(|| {
        non_null!(c);
        match (*c).0.check() {
            Ok(()) => B8Status::B8_OK,
            Err(e) => fail(e),
        }
    })
}

/// Number of terms in the certificate.
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn b8_certificate_len(c: *const B8Certificate, out: *mut usize) -> B8Status {
    guard(|| {
        non_null!(c, out);
        *out = match &(*c).0 {
            AnyCertificate::Curve(c) => c.terms.len(),
            AnyCertificate::Divisor(c) => c.terms.len(),
        };
        B8Status::B8_OK
    })
}

/// # Safety
/// `c` must be NULL or a handle from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn b8_certificate_free(c: *mut B8Certificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}
