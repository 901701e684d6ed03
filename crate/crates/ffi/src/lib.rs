//! C ABI over `jacobi-scattering`.
//!
//! Sequences are passed around as opaque `JscSequence` handles created by
//! `jsc_sequence_new` / `jsc_sequence_from_json` and released with
//! `jsc_sequence_free`. Every fallible call returns a `JscStatus`; on failure
//! `jsc_last_error_message` describes the error until the calling thread's
//! next call.
//! Spectral points are given by the angle `theta` of `z = exp(i theta)`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use jacobi_scattering::cli::parse_coefficients;
use jacobi_scattering::lattice::{fragment, validate_sequence, IndexWindow, Limits};
use jacobi_scattering::scattering::extract_scattering;
use jacobi_scattering::spectral::{band_edges, lambda_from_z};
use jacobi_scattering::transition::{factorization_check, transition_at};
use jacobi_scattering::{CoefficientSequence, Error, Fragmentation, RawCoefficients};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JscStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NumericalFault = 3,
    Panic = 4,
}

/// Opaque handle to a validated coefficient sequence.
pub struct JscSequence {
    inner: CoefficientSequence,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct JscScattering {
    pub t_re: f64,
    pub t_im: f64,
    pub r_re: f64,
    pub r_im: f64,
    pub l_re: f64,
    pub l_im: f64,
}

/// Row-major 2x2 complex matrix: entry (i, j) is `re[2*i + j] + i im[2*i + j]`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct JscMatrix2 {
    pub re: [f64; 4],
    pub im: [f64; 4],
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct JscBandEdges {
    pub lambda_min: f64,
    pub lambda_max: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> JscStatus {
    if err.is_input_error() {
        JscStatus::InvalidInput
    } else {
        JscStatus::NumericalFault
    }
}

fn guard(f: impl FnOnce() -> Result<(), (JscStatus, String)>) -> JscStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            JscStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            JscStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (JscStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (JscStatus, String) {
    (JscStatus::NullPointer, format!("{what} is null"))
}

unsafe fn sequence<'a>(handle: *const JscSequence) -> Result<&'a CoefficientSequence, (JscStatus, String)> {
    handle.as_ref().map(|h| &h.inner).ok_or_else(|| null("sequence handle"))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], (JscStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn point(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

unsafe fn into_handle(seq: CoefficientSequence, out: *mut *mut JscSequence) {
    *out = Box::into_raw(Box::new(JscSequence { inner: seq }));
}

/// Creates a sequence from dense arrays of length `len = n_max - n_min + 1`.
///
/// # Safety
/// `a`, `b`, `w` must each point to `len` readable doubles; `out` must be a
/// valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn jsc_sequence_new(
    a_inf: f64,
    b_inf: f64,
    w_inf: f64,
    n_min: i64,
    n_max: i64,
    a: *const f64,
    b: *const f64,
    w: *const f64,
    len: usize,
    out: *mut *mut JscSequence,
) -> JscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let raw = RawCoefficients {
            a_inf,
            b_inf,
            w_inf,
            n_min,
            n_max,
            a: slice(a, len, "a")?.to_vec(),
            b: slice(b, len, "b")?.to_vec(),
            w: slice(w, len, "w")?.to_vec(),
        };
        let seq = validate_sequence(&raw).map_err(lib_err)?;
        into_handle(seq, out);
        Ok(())
    })
}

/// Creates a sequence from the JSON coefficient-file format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jsc_sequence_from_json(json: *const c_char, out: *mut *mut JscSequence) -> JscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (JscStatus::InvalidInput, format!("json is not UTF-8: {e}")))?;
        let raw = parse_coefficients(text).map_err(|e| (JscStatus::InvalidInput, e))?;
        let seq = validate_sequence(&raw).map_err(lib_err)?;
        into_handle(seq, out);
        Ok(())
    })
}

/// Releases a handle. Passing null is a no-op.
///
/// # Safety
/// `seq` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn jsc_sequence_free(seq: *mut JscSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Stored window of the sequence.
///
/// # Safety
/// `seq` must be a live handle; `n_min` and `n_max` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jsc_sequence_window(seq: *const JscSequence, n_min: *mut i64, n_max: *mut i64) -> JscStatus {
    guard(|| {
        let seq = sequence(seq)?;
        if n_min.is_null() || n_max.is_null() {
            return Err(null("output"));
        }
        let IndexWindow { n_min: lo, n_max: hi } = seq.window();
        *n_min = lo;
        *n_max = hi;
        Ok(())
    })
}

/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jsc_band_edges(seq: *const JscSequence, out: *mut JscBandEdges) -> JscStatus {
    guard(|| {
        let seq = sequence(seq)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let e = band_edges(&seq.limits());
        *out = JscBandEdges {
            lambda_min: e.lambda_min,
            lambda_max: e.lambda_max,
        };
        Ok(())
    })
}

/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jsc_lambda_from_theta(seq: *const JscSequence, theta: f64, out: *mut f64) -> JscStatus {
    guard(|| {
        let seq = sequence(seq)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = lambda_from_z(&seq.limits(), point(theta)).map_err(lib_err)?;
        Ok(())
    })
}

/// `T`, `R`, `L` at `z = exp(i theta)`.
///
/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jsc_scattering(seq: *const JscSequence, theta: f64, out: *mut JscScattering) -> JscStatus {
    guard(|| {
        let seq = sequence(seq)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let sd = extract_scattering(seq, point(theta)).map_err(lib_err)?;
        *out = JscScattering {
            t_re: sd.t.re,
            t_im: sd.t.im,
            r_re: sd.r.re,
            r_im: sd.r.im,
            l_re: sd.l.re,
            l_im: sd.l.im,
        };
        Ok(())
    })
}

/// Transition matrix at `z = exp(i theta)`.
///
/// # Safety
/// `seq` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jsc_transition_matrix(seq: *const JscSequence, theta: f64, out: *mut JscMatrix2) -> JscStatus {
    guard(|| {
        let seq = sequence(seq)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let m = transition_at(seq, point(theta)).map_err(lib_err)?.entries;
        let mut res = JscMatrix2::default();
        for i in 0..2 {
            for j in 0..2 {
                res.re[2 * i + j] = m.get(i, j).re;
                res.im[2 * i + j] = m.get(i, j).im;
            }
        }
        *out = res;
        Ok(())
    })
}

/// Largest entrywise difference between the transition matrix and the
/// ordered product over the fragments cut at `breakpoints`.
///
/// # Safety
/// `seq` must be a live handle; `breakpoints` must point to `count`
/// integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jsc_factorization_residual(
    seq: *const JscSequence,
    breakpoints: *const i64,
    count: usize,
    theta: f64,
    out: *mut f64,
) -> JscStatus {
    guard(|| {
        let seq = sequence(seq)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        if count > 0 && breakpoints.is_null() {
            return Err(null("breakpoints"));
        }
        let bp = if count == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(breakpoints, count).to_vec()
        };
        let frag = Fragmentation::new(bp).map_err(lib_err)?;
        *out = factorization_check(seq, &frag, point(theta), f64::INFINITY)
            .map_err(lib_err)?
            .residual;
        Ok(())
    })
}

/// Number of fragments produced by `count` breakpoints, validating them.
///
/// # Safety
/// `seq` must be a live handle; `breakpoints` must point to `count` integers.
#[no_mangle]
pub unsafe extern "C" fn jsc_fragment_count(
    seq: *const JscSequence,
    breakpoints: *const i64,
    count: usize,
    out: *mut usize,
) -> JscStatus {
    guard(|| {
        let seq = sequence(seq)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        if count > 0 && breakpoints.is_null() {
            return Err(null("breakpoints"));
        }
        let bp = if count == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(breakpoints, count).to_vec()
        };
        let frag = Fragmentation::new(bp).map_err(lib_err)?;
        *out = fragment(seq, &frag).len();
        Ok(())
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn jsc_status_message(status: JscStatus) -> *const c_char {
    let s: &'static CStr = match status {
        JscStatus::Ok => c"ok",
        JscStatus::NullPointer => c"null pointer argument",
        JscStatus::InvalidInput => c"invalid input",
        JscStatus::NumericalFault => c"numerical fault",
        JscStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Error message of the previous call on this thread, or null if it
/// succeeded. The pointer is valid until the next call into this library
/// from the same thread.
#[no_mangle]
pub extern "C" fn jsc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates the unperturbed sequence with the given limits.
///
/// # Safety
/// `out` must be a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn jsc_sequence_unperturbed(
    a_inf: f64,
    b_inf: f64,
    w_inf: f64,
    out: *mut *mut JscSequence,
) -> JscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let limits = Limits::new(a_inf, b_inf, w_inf).map_err(lib_err)?;
        into_handle(CoefficientSequence::free(limits), out);
        Ok(())
    })
}
