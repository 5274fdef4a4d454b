//! C interface to `kcolor`.
//!
//! Instances and bound reports are opaque handles owned by the caller and
//! released with their `_free` function. Every fallible call returns a
//! [`KcStatus`]; on failure [`kc_last_error`] describes the error until the
//! next call on the same thread. Strings returned through out-parameters are
//! released with [`kc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use kcolor::asymptotics::{render_decimal, to_f64, Rational};
use kcolor::commands::{cmd_bound, cmd_count, cmd_verify, BoundOutcome};
use kcolor::instance::{Instance, InstanceFile};
use kcolor::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Geometry = 4,
    InvalidInput = 5,
    TooLarge = 6,
    Io = 7,
    Invariant = 8,
    Panic = 9,
}

/// Which exact quantity of a bound report to read.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KcQuantity {
    Alpha = 0,
    Beta = 1,
    Gamma = 2,
    Delta = 3,
    Constant = 4,
    Bound = 5,
    BookBound = 6,
    LowerBound = 7,
}

/// A validated instance.
pub struct KcInstance {
    inner: Instance,
}

/// The result of a bound computation.
pub struct KcBound {
    inner: BoundOutcome,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> KcStatus {
    match e {
        Error::Parse { .. } => KcStatus::Parse,
        Error::DuplicatePoint(..) | Error::Collinear(..) | Error::SharedEndpoint(..) => KcStatus::Geometry,
        Error::TooLarge(_) => KcStatus::TooLarge,
        Error::Io(_) => KcStatus::Io,
        Error::Invariant(_) => KcStatus::Invariant,
        _ => KcStatus::InvalidInput,
    }
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (KcStatus, String)>) -> KcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            KcStatus::Panic
        }
    }
}

fn lib(e: Error) -> (KcStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (KcStatus, String) {
    (KcStatus::NullPointer, format!("{name} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, name: &str) -> Result<&'a str, (KcStatus, String)> {
    if s.is_null() {
        return Err(null(name));
    }
    unsafe { CStr::from_ptr(s) }.to_str().map_err(|_| (KcStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, (KcStatus, String)> {
    unsafe { p.as_ref() }.ok_or_else(|| null(name))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), (KcStatus, String)> {
    if out.is_null() {
        return Err(null(name));
    }
    unsafe { out.write(value) };
    Ok(())
}

fn new_instance(text: &str) -> Result<*mut KcInstance, (KcStatus, String)> {
    let inner = InstanceFile::parse(text).and_then(|f| f.validate()).map_err(lib)?;
    Ok(Box::into_raw(Box::new(KcInstance { inner })))
}

/// Parses and validates an instance from NUL-terminated text.
///
/// # Safety
/// `text` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_instance_from_str(text: *const c_char, out: *mut *mut KcInstance) -> KcStatus {
    guard(|| {
        let text = unsafe { read_str(text, "text") }?;
        unsafe { write_out(out, new_instance(text)?, "out") }
    })
}

/// Reads, parses and validates an instance file.
///
/// # Safety
/// `path` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_instance_from_path(path: *const c_char, out: *mut *mut KcInstance) -> KcStatus {
    guard(|| {
        let path = unsafe { read_str(path, "path") }?;
        let text = std::fs::read_to_string(Path::new(path)).map_err(|e| lib(e.into()))?;
        unsafe { write_out(out, new_instance(&text)?, "out") }
    })
}

/// # Safety
/// `inst` must be null or a handle from `kc_instance_from_*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kc_instance_free(inst: *mut KcInstance) {
    if !inst.is_null() {
        drop(unsafe { Box::from_raw(inst) });
    }
}

/// Number of points and colors.
///
/// # Safety
/// `inst` must be a live handle; `n` and `k` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn kc_instance_size(inst: *const KcInstance, n: *mut usize, k: *mut u32) -> KcStatus {
    guard(|| {
        let inst = unsafe { deref(inst, "inst") }?;
        unsafe { write_out(n, inst.inner.n(), "n") }?;
        unsafe { write_out(k, inst.inner.k(), "k") }
    })
}

/// Total and monochromatic crossings.
///
/// # Safety
/// `inst` must be a live handle; `total` and `monochromatic` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn kc_count(inst: *const KcInstance, total: *mut u64, monochromatic: *mut u64) -> KcStatus {
    guard(|| {
        let inst = unsafe { deref(inst, "inst") }?;
        let r = cmd_count(&inst.inner).map_err(lib)?;
        unsafe { write_out(total, r.total_crossings, "total") }?;
        unsafe { write_out(monochromatic, r.monochromatic, "monochromatic") }
    })
}

/// Computes the asymptotic coefficients and bound, with the optimal matching
/// or (when `use_given_matching`) the instance's own matching and details.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_bound(inst: *const KcInstance, use_given_matching: bool, out: *mut *mut KcBound) -> KcStatus {
    guard(|| {
        let inst = unsafe { deref(inst, "inst") }?;
        let inner = cmd_bound(&inst.inner, use_given_matching).map_err(lib)?;
        unsafe { write_out(out, Box::into_raw(Box::new(KcBound { inner })), "out") }
    })
}

/// # Safety
/// `bound` must be null or a handle from `kc_bound` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kc_bound_free(bound: *mut KcBound) {
    if !bound.is_null() {
        drop(unsafe { Box::from_raw(bound) });
    }
}

fn quantity(b: &KcBound, q: KcQuantity) -> Rational {
    let r = &b.inner.report;
    match q {
        KcQuantity::Alpha => r.coeffs.alpha.clone(),
        KcQuantity::Beta => r.coeffs.beta.clone(),
        KcQuantity::Gamma => r.coeffs.gamma.clone(),
        KcQuantity::Delta => r.coeffs.delta.clone(),
        KcQuantity::Constant => r.coeffs.constant.clone(),
        KcQuantity::Bound => r.bound.clone(),
        KcQuantity::BookBound => r.book_bound(),
        KcQuantity::LowerBound => r.lower_bound(),
    }
}

fn string_out(out: *mut *mut c_char, s: String) -> Result<(), (KcStatus, String)> {
    let c = CString::new(s).map_err(|_| (KcStatus::Invariant, "string contains NUL".to_string()))?;
    unsafe { write_out(out, c.into_raw(), "out") }
}

/// Nearest `double` to a quantity.
///
/// # Safety
/// `bound` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_bound_value(bound: *const KcBound, which: KcQuantity, out: *mut f64) -> KcStatus {
    guard(|| {
        let b = unsafe { deref(bound, "bound") }?;
        unsafe { write_out(out, to_f64(&quantity(b, which)), "out") }
    })
}

/// A quantity as an exact fraction `p/q`, or `p` for integers.
///
/// # Safety
/// `bound` must be a live handle and `out` a valid pointer. The string is
/// released with `kc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn kc_bound_exact(bound: *const KcBound, which: KcQuantity, out: *mut *mut c_char) -> KcStatus {
    guard(|| {
        let b = unsafe { deref(bound, "bound") }?;
        string_out(out, quantity(b, which).to_string())
    })
}

/// A quantity rendered with `digits` significant digits.
///
/// # Safety
/// As for `kc_bound_exact`.
#[no_mangle]
pub unsafe extern "C" fn kc_bound_decimal(
    bound: *const KcBound,
    which: KcQuantity,
    digits: u32,
    out: *mut *mut c_char,
) -> KcStatus {
    guard(|| {
        let b = unsafe { deref(bound, "bound") }?;
        if digits == 0 || digits > 1000 {
            return Err((KcStatus::InvalidInput, format!("digits {digits} outside 1..=1000")));
        }
        string_out(out, render_decimal(&quantity(b, which), digits as usize))
    })
}

/// The matching target of every vertex used for the bound; `targets` must
/// hold `n` entries.
///
/// # Safety
/// `bound` must be a live handle and `targets` point to `len` writable entries.
#[no_mangle]
pub unsafe extern "C" fn kc_bound_matching(bound: *const KcBound, targets: *mut usize, len: usize) -> KcStatus {
    guard(|| {
        let b = unsafe { deref(bound, "bound") }?;
        let t = b.inner.matching.targets();
        if targets.is_null() {
            return Err(null("targets"));
        }
        if len < t.len() {
            return Err((KcStatus::InvalidInput, format!("buffer holds {len} entries, need {}", t.len())));
        }
        unsafe { ptr::copy_nonoverlapping(t.as_ptr(), targets, t.len()) };
        Ok(())
    })
}

/// Checks the crossing formula against the explicit construction up to
/// `t_max` doublings. `passed` is false on a mismatch; the status is only
/// non-OK when the check could not run.
///
/// # Safety
/// `inst` must be a live handle and `passed` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kc_verify(inst: *const KcInstance, t_max: u32, passed: *mut bool) -> KcStatus {
    guard(|| {
        let inst = unsafe { deref(inst, "inst") }?;
        let r = cmd_verify(&inst.inner, t_max).map_err(lib)?;
        unsafe { write_out(passed, r.passed(), "passed") }
    })
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library; valid until the next call.
#[no_mangle]
pub extern "C" fn kc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
