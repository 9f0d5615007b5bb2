//! C ABI over `bwl`.
//!
//! Every fallible call returns a [`BwlStatus`]. On failure the message is kept
//! per thread and can be read with [`bwl_last_error_message`]. Witnesses are
//! opaque `BwlWitness*` handles released with [`bwl_witness_free`]. Strings
//! returned through out-parameters are owned by the caller and released with
//! [`bwl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bwl::decomposability::is_decomposable;
use bwl::io::{record_from_json, record_to_json, CertificateJson};
use bwl::positivity::{Method, SeeSawOptions, Trinary};
use bwl::witness::{witness_from_torus, NamedWitness, Provenance};
use bwl::{certify, classify, AlphaVector, ClassifyOptions, Error, ToleranceConfig, WitnessClass, WitnessRecord};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BwlStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed or out-of-domain input.
    Invalid = 2,
    /// No certificate in the numerical gray band.
    GrayZone = 3,
    /// A certificate failed to re-verify.
    Verification = 4,
    /// Output buffer too small.
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BwlTrinary {
    Yes = 0,
    No = 1,
    Undetermined = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BwlClass {
    CompletelyPositive = 0,
    DecomposableWitness = 1,
    IndecomposableWitness = 2,
    /// Block-positive, decomposability unknown.
    Witness = 3,
    NotBlockPositive = 4,
    Undetermined = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BwlMethod {
    ExactN2 = 0,
    ExactN3 = 1,
    CompletePositivity = 2,
    CyclicNecessary = 3,
    WeylSufficient = 4,
    DecomposableSplit = 5,
    SeeSaw = 6,
}

/// Flattened verdict. Tri-state flags use -1 for unknown.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BwlVerdict {
    pub witness_class: BwlClass,
    pub block_positive: BwlTrinary,
    pub method: BwlMethod,
    pub cp: bool,
    pub decomposable: i32,
    pub optimal: i32,
    /// Product-vector expectation when a certificate exists, NaN otherwise.
    pub certificate_value: f64,
}

/// Opaque witness handle.
pub struct BwlWitness {
    record: WitnessRecord,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BwlStatus {
    match e {
        Error::GrayZone { .. } => BwlStatus::GrayZone,
        Error::Verification(_) => BwlStatus::Verification,
        _ => BwlStatus::Invalid,
    }
}

enum Fail {
    Status(BwlStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn null() -> Fail {
    Fail::Status(BwlStatus::NullPointer, "null pointer argument".into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BwlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BwlStatus::Ok,
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            BwlStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Status(BwlStatus::Invalid, "string is not valid UTF-8".into()))
}

unsafe fn witness<'a>(w: *const BwlWitness) -> Result<&'a BwlWitness, Fail> {
    w.as_ref().ok_or_else(null)
}

unsafe fn put_witness(out: *mut *mut BwlWitness, record: WitnessRecord) -> Result<(), Fail> {
    *out = Box::into_raw(Box::new(BwlWitness { record }));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail::Status(BwlStatus::Invalid, "interior NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bwl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bwl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Build `W[α]` from `n` coefficients.
///
/// # Safety
/// `alpha` must point to `n` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bwl_witness_from_alpha(alpha: *const f64, n: usize, out: *mut *mut BwlWitness) -> BwlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let a = AlphaVector::new(slice(alpha, n)?.to_vec())?;
        put_witness(out, WitnessRecord::new(a, Provenance::FromAlpha))
    })
}

/// Build a torus witness. `sign` is 0 when absent, otherwise +1 or -1.
///
/// # Safety
/// `phases` must point to `count` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bwl_witness_from_torus(
    n: usize,
    phases: *const f64,
    count: usize,
    sign: i32,
    out: *mut *mut BwlWitness,
) -> BwlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let sign = match sign {
            0 => None,
            1 => Some(1),
            -1 => Some(-1),
            s => {
                return Err(Fail::Status(
                    BwlStatus::Invalid,
                    format!("sign must be 0, 1 or -1, got {s}"),
                ))
            }
        };
        put_witness(out, witness_from_torus(n, slice(phases, count)?, sign)?)
    })
}

/// Build a named witness: `reduction`, `choi-i`, `choi-ii`, `wprime` or `non-torus:K`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bwl_witness_from_name(n: usize, name: *const c_char, out: *mut *mut BwlWitness) -> BwlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let named: NamedWitness = str_arg(name)?.parse()?;
        put_witness(out, WitnessRecord::new(named.alpha(n)?, Provenance::Named))
    })
}

/// Parse a witness record from JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bwl_witness_from_json(json: *const c_char, out: *mut *mut BwlWitness) -> BwlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        put_witness(out, record_from_json(str_arg(json)?)?)
    })
}

/// Release a handle. NULL is ignored.
///
/// # Safety
/// `w` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bwl_witness_free(w: *mut BwlWitness) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Local dimension `n`, or 0 for NULL.
///
/// # Safety
/// `w` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bwl_witness_dim(w: *const BwlWitness) -> usize {
    w.as_ref().map_or(0, |w| w.record.dim())
}

/// Copy the `n` alpha coefficients into `out`.
///
/// # Safety
/// `out` must have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn bwl_witness_alpha(w: *const BwlWitness, out: *mut f64, len: usize) -> BwlStatus {
    guard(|| {
        let v = witness(w)?.record.alpha().values();
        if len < v.len() {
            return Err(Fail::Status(
                BwlStatus::BufferTooSmall,
                format!("need {} doubles", v.len()),
            ));
        }
        if out.is_null() {
            return Err(null());
        }
        ptr::copy_nonoverlapping(v.as_ptr(), out, v.len());
        Ok(())
    })
}

/// Copy the `n²×n²` matrix in row-major order with interleaved real and
/// imaginary parts, `2·n⁴` doubles in total.
///
/// # Safety
/// `out` must have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn bwl_witness_matrix(w: *const BwlWitness, out: *mut f64, len: usize) -> BwlStatus {
    guard(|| {
        let m = witness(w)?.record.matrix().matrix();
        let d = m.nrows();
        if len < 2 * d * d {
            return Err(Fail::Status(
                BwlStatus::BufferTooSmall,
                format!("need {} doubles", 2 * d * d),
            ));
        }
        if out.is_null() {
            return Err(null());
        }
        let dst = std::slice::from_raw_parts_mut(out, 2 * d * d);
        for r in 0..d {
            for c in 0..d {
                let z = m[(r, c)];
                dst[2 * (r * d + c)] = z.re;
                dst[2 * (r * d + c) + 1] = z.im;
            }
        }
        Ok(())
    })
}

fn tri(t: Option<bool>) -> i32 {
    t.map_or(-1, i32::from)
}

/// Classify the witness. Zero `restarts` or `iterations` selects the defaults.
///
/// # Safety
/// `w` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bwl_witness_classify(
    w: *const BwlWitness,
    restarts: usize,
    iterations: usize,
    seed: u64,
    out: *mut BwlVerdict,
) -> BwlStatus {
    guard(|| {
        let w = witness(w)?;
        if out.is_null() {
            return Err(null());
        }
        let mut see_saw = SeeSawOptions {
            seed,
            ..Default::default()
        };
        if restarts > 0 {
            see_saw.restarts = restarts;
        }
        if iterations > 0 {
            see_saw.iterations = iterations;
        }
        let opts = ClassifyOptions {
            tol: ToleranceConfig::default(),
            see_saw,
        };
        let v = classify(w.record.alpha(), &opts)?;
        *out = BwlVerdict {
            witness_class: match v.class() {
                WitnessClass::CompletelyPositive => BwlClass::CompletelyPositive,
                WitnessClass::DecomposableWitness => BwlClass::DecomposableWitness,
                WitnessClass::IndecomposableWitness => BwlClass::IndecomposableWitness,
                WitnessClass::Witness => BwlClass::Witness,
                WitnessClass::NotBlockPositive => BwlClass::NotBlockPositive,
                WitnessClass::Undetermined => BwlClass::Undetermined,
            },
            block_positive: match v.block_positive {
                Trinary::Yes => BwlTrinary::Yes,
                Trinary::No => BwlTrinary::No,
                Trinary::Undetermined => BwlTrinary::Undetermined,
            },
            method: match v.method {
                Method::ExactN2 => BwlMethod::ExactN2,
                Method::ExactN3 => BwlMethod::ExactN3,
                Method::CompletePositivity => BwlMethod::CompletePositivity,
                Method::CyclicNecessary => BwlMethod::CyclicNecessary,
                Method::WeylSufficient => BwlMethod::WeylSufficient,
                Method::DecomposableSplit => BwlMethod::DecomposableSplit,
                Method::SeeSaw => BwlMethod::SeeSaw,
            },
            cp: v.cp,
            decomposable: tri(v.decomposable),
            optimal: tri(v.optimal),
            certificate_value: v.certificate.as_ref().map_or(f64::NAN, |c| c.value),
        };
        Ok(())
    })
}

/// Whether the witness admits a `P + Q^Γ` split (symmetric alpha).
///
/// # Safety
/// `w` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bwl_witness_is_decomposable(w: *const BwlWitness, out: *mut bool) -> BwlStatus {
    guard(|| {
        let w = witness(w)?;
        if out.is_null() {
            return Err(null());
        }
        *out = is_decomposable(w.record.alpha(), &ToleranceConfig::default());
        Ok(())
    })
}

/// Serialize the witness record as JSON.
///
/// # Safety
/// `w` must be a live handle and `out` writable. Free the result with
/// [`bwl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn bwl_witness_to_json(w: *const BwlWitness, out: *mut *mut c_char) -> BwlStatus {
    guard(|| {
        let w = witness(w)?;
        if out.is_null() {
            return Err(null());
        }
        put_string(out, record_to_json(&w.record)?)
    })
}

/// Produce a verified certificate as JSON. Pass `k < 0` and a NaN `epsilon`
/// for the defaults.
///
/// # Safety
/// `w` must be a live handle and `out` writable. Free the result with
/// [`bwl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn bwl_witness_certify_json(
    w: *const BwlWitness,
    k: i64,
    epsilon: f64,
    out: *mut *mut c_char,
) -> BwlStatus {
    guard(|| {
        let w = witness(w)?;
        if out.is_null() {
            return Err(null());
        }
        let tol = ToleranceConfig::default();
        let k = usize::try_from(k).ok();
        let epsilon = (!epsilon.is_nan()).then_some(epsilon);
        let cert = certify(w.record.alpha(), k, epsilon, &tol)?;
        let file = CertificateJson::new(&w.record, &cert)?;
        file.verify(&tol)?;
        let text = serde_json::to_string(&file).map_err(Error::from)?;
        put_string(out, text)
    })
}

/// Re-check a certificate JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn bwl_certificate_verify_json(json: *const c_char) -> BwlStatus {
    guard(|| {
        let file: CertificateJson = serde_json::from_str(str_arg(json)?).map_err(Error::from)?;
        file.verify(&ToleranceConfig::default())?;
        Ok(())
    })
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bwl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
