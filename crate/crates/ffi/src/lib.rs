//! C interface to the certification engine.
//!
//! Instances and certificates are opaque handles created and released by
//! this library. Every fallible call returns a `WcError`; on failure the
//! message is kept per thread and read back with `wc_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use waring_cert::certify::{certify, verify_witness, Certificate, CertifyConfig, Status};
use waring_cert::io::{self, AnyInstance, AnyPoints};
use waring_cert::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WcError {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Input = 4,
    /// An internal consistency check failed; please report the input.
    Invariant = 5,
    Panic = 6,
    BufferTooSmall = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WcStatus {
    Identifiable = 0,
    NotIdentifiable = 1,
    Undecided = 2,
}

/// A parsed instance: points and a sextic over Q or F_p.
pub struct WcInstance(AnyInstance);

/// The result of a certification run together with its JSON text.
pub struct WcCertificate {
    cert: Certificate,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code_of(e: &Error) -> WcError {
    match e {
        Error::Parse(_) => WcError::Parse,
        Error::Input(_) | Error::Io(_) => WcError::Input,
        Error::Invariant(_) => WcError::Invariant,
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), (WcError, String)>) -> WcError {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            WcError::Ok
        }
        Ok(Err((code, msg))) => {
            set_last_error(&msg);
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("panic: {msg}"));
            WcError::Panic
        }
    }
}

fn lib(e: Error) -> (WcError, String) {
    (code_of(&e), e.to_string())
}

fn null(what: &str) -> (WcError, String) {
    (WcError::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (WcError, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (WcError::InvalidUtf8, format!("{what}: {e}")))
}

/// Message of the last failed call on this thread, or an empty string. The
/// pointer stays valid until the next call into this library on the thread.
#[no_mangle]
pub extern "C" fn wc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn wc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses an instance file's JSON text. On success `*out` owns a new handle
/// to be released with `wc_instance_free`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wc_instance_from_json(json: *const c_char, out: *mut *mut WcInstance) -> WcError {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = std::ptr::null_mut();
        let inst = io::load_instance(text(json, "json")?).map_err(lib)?;
        *out = Box::into_raw(Box::new(WcInstance(inst)));
        Ok(())
    })
}

/// Number of points of the instance, 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wc_instance_length(inst: *const WcInstance) -> usize {
    match inst.as_ref() {
        Some(WcInstance(AnyInstance::Rational(i))) => i.len(),
        Some(WcInstance(AnyInstance::Prime(i))) => i.len(),
        None => 0,
    }
}

/// # Safety
/// `inst` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn wc_instance_free(inst: *mut WcInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Runs the full pipeline with default parameters and the given seed.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wc_certify(inst: *const WcInstance, seed: u64, out: *mut *mut WcCertificate) -> WcError {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = std::ptr::null_mut();
        let inst = inst.as_ref().ok_or_else(|| null("instance"))?;
        let cfg = CertifyConfig { seed, ..Default::default() };
        let cert = match &inst.0 {
            AnyInstance::Rational(i) => certify(i, &cfg),
            AnyInstance::Prime(i) => certify(i, &cfg),
        }
        .map_err(lib)?;
        let json = CString::new(cert.to_json()).map_err(|e| (WcError::Invariant, e.to_string()))?;
        *out = Box::into_raw(Box::new(WcCertificate { cert, json }));
        Ok(())
    })
}

/// # Safety
/// `cert` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wc_certificate_status(cert: *const WcCertificate, out: *mut WcStatus) -> WcError {
    guard(|| {
        let cert = cert.as_ref().ok_or_else(|| null("certificate"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = match cert.cert.status {
            Status::Identifiable => WcStatus::Identifiable,
            Status::NotIdentifiable => WcStatus::NotIdentifiable,
            Status::Undecided => WcStatus::Undecided,
        };
        Ok(())
    })
}

/// Certified rank, or -1 when minimality was not established.
///
/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wc_certificate_rank(cert: *const WcCertificate) -> i64 {
    cert.as_ref().and_then(|c| c.cert.rank_certified).map_or(-1, |r| r as i64)
}

/// Certificate JSON, owned by the handle and valid until it is freed.
///
/// # Safety
/// `cert` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wc_certificate_json(cert: *const WcCertificate) -> *const c_char {
    cert.as_ref().map_or(std::ptr::null(), |c| c.json.as_ptr())
}

/// # Safety
/// `cert` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn wc_certificate_free(cert: *mut WcCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Checks a witness (bare, inside a certificate, or a generated instance's
/// known witness) against an 18-point instance.
///
/// # Safety
/// `inst` must be a live handle, `witness_json` nul-terminated and `valid`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wc_verify_witness(inst: *const WcInstance, witness_json: *const c_char, seed: u64, valid: *mut bool) -> WcError {
    guard(|| {
        let inst = inst.as_ref().ok_or_else(|| null("instance"))?;
        let valid = valid.as_mut().ok_or_else(|| null("valid"))?;
        let w = text(witness_json, "witness_json")?;
        let v = match &inst.0 {
            AnyInstance::Rational(i) => io::load_witness(i.field(), w).and_then(|w| verify_witness(i, &w, seed)),
            AnyInstance::Prime(i) => io::load_witness(i.field(), w).and_then(|w| verify_witness(i, &w, seed)),
        }
        .map_err(lib)?;
        *valid = v.valid;
        Ok(())
    })
}

/// Writes `h(0), ..., h(max_degree)` of the points in a points or instance
/// file into `out`, which must hold `max_degree + 1` entries.
///
/// # Safety
/// `points_json` must be nul-terminated and `out` valid for `out_len` writes.
#[no_mangle]
pub unsafe extern "C" fn wc_hilbert_function(points_json: *const c_char, max_degree: usize, out: *mut usize, out_len: usize) -> WcError {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if out_len < max_degree + 1 {
            return Err((WcError::BufferTooSmall, format!("{} entries needed, buffer holds {out_len}", max_degree + 1)));
        }
        let h = match io::load_points(text(points_json, "points_json")?).map_err(lib)? {
            AnyPoints::Rational(a) => a.hf_profile(max_degree).h,
            AnyPoints::Prime(a) => a.hf_profile(max_degree).h,
        };
        std::slice::from_raw_parts_mut(out, max_degree + 1).copy_from_slice(&h);
        Ok(())
    })
}
