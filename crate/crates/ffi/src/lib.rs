//! C ABI over `speclab`.
//!
//! Every fallible call returns a [`SpeclabStatus`]; on failure the message is kept
//! in a thread-local slot readable through [`speclab_last_error_message`].
//! Handles are opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use speclab::coupling::{branch_mus, classify, critical_alpha, CouplingParams, Mu, TransitionKind};
use speclab::hamiltonian::{count_below_epsilon, h_eigenvalues_below_threshold, HSpectrumOptions, HSpectrumResult};
use speclab::jacobi_ops::{count_stabilized, JacobiFamily, Side, TruncationPolicy};
use speclab::recurrence::secular_defect;
use speclab::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeclabStatus {
    Ok = 0,
    Invalid = 2,
    NonConvergence = 3,
    NullPointer = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeclabKind {
    Subcritical = 0,
    Critical = 1,
    Supercritical = 2,
    NonpositiveOrDivergent = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeclabFamily {
    CalJ0 = 0,
    CalJ = 1,
    Jeps = 2,
    J0bar = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeclabSide {
    Plus = 0,
    Minus = 1,
}

/// Opaque coupling `(alpha, beta, gamma)`.
pub struct SpeclabCoupling(CouplingParams);

/// Opaque result of [`speclab_h_spectrum`].
pub struct SpeclabSpectrum(HSpectrumResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: SpeclabStatus, msg: impl Into<String>) -> SpeclabStatus {
    set_last_error(msg.into());
    status
}

fn from_error(e: Error) -> SpeclabStatus {
    let status = match e {
        Error::NonConvergence(_) => SpeclabStatus::NonConvergence,
        _ => SpeclabStatus::Invalid,
    };
    fail(status, e.to_string())
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard<F>(f: F) -> SpeclabStatus
where
    F: FnOnce() -> Result<(), SpeclabStatus>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SpeclabStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => fail(SpeclabStatus::Panic, "internal panic"),
    }
}

fn check<T>(r: speclab::Result<T>) -> Result<T, SpeclabStatus> {
    r.map_err(from_error)
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, SpeclabStatus> {
    p.as_mut().ok_or_else(|| fail(SpeclabStatus::NullPointer, format!("{name} is null")))
}

unsafe fn in_ref<'a, T>(p: *const T, name: &str) -> Result<&'a T, SpeclabStatus> {
    p.as_ref().ok_or_else(|| fail(SpeclabStatus::NullPointer, format!("{name} is null")))
}

/// Copies `values` into `buf[..cap]`, always reporting the full length.
unsafe fn copy_out<T: Copy>(values: &[T], buf: *mut T, cap: usize, out_len: *mut usize) -> Result<(), SpeclabStatus> {
    *out_ref(out_len, "out_len")? = values.len();
    if values.len() > cap {
        return Err(fail(SpeclabStatus::BufferTooSmall, format!("buffer holds {cap} values, {} needed", values.len())));
    }
    if !values.is_empty() {
        if buf.is_null() {
            return Err(fail(SpeclabStatus::NullPointer, "buf is null"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    }
    Ok(())
}

fn policy(n_cap: usize) -> Result<TruncationPolicy, SpeclabStatus> {
    if n_cap < 4 {
        return Err(fail(SpeclabStatus::Invalid, format!("n_cap must be >= 4, got {n_cap}")));
    }
    Ok(TruncationPolicy::with_cap(n_cap))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn speclab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Length in bytes of the last error message on this thread, without the NUL; 0 if none.
#[no_mangle]
pub extern "C" fn speclab_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, String::len))
}

/// Copies the last error message (NUL-terminated) into `buf`.
///
/// Returns the number of bytes written without the NUL, 0 when there is no
/// error, or -1 when `buf` is null or too small.
///
/// # Safety
/// `buf` must point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn speclab_last_error_message(buf: *mut c_char, len: usize) -> c_int {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        if buf.is_null() || len < msg.len() + 1 {
            return -1;
        }
        ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, msg.len());
        *buf.add(msg.len()) = 0;
        msg.len() as c_int
    })
}

/// Creates a coupling handle.
///
/// # Safety
/// `out` must be a valid pointer; on success it receives a handle owned by the caller.
#[no_mangle]
pub unsafe extern "C" fn speclab_coupling_new(
    alpha: f64,
    beta: f64,
    gamma_re: f64,
    gamma_im: f64,
    out: *mut *mut SpeclabCoupling,
) -> SpeclabStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let p = check(CouplingParams::new(alpha, beta, Complex64::new(gamma_re, gamma_im)))?;
        *out = Box::into_raw(Box::new(SpeclabCoupling(p)));
        Ok(())
    })
}

/// # Safety
/// `h` must be null or a handle from [`speclab_coupling_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn speclab_coupling_free(h: *mut SpeclabCoupling) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Jacobi couplings of every branch (`mu1, mu2`, or the single `mu` when
/// `beta = 0`); a divergent coupling is reported as `+INFINITY`.
///
/// # Safety
/// `h` must be a live handle, `buf` must hold `cap` doubles and `out_len` be valid.
#[no_mangle]
pub unsafe extern "C" fn speclab_branch_mus(
    h: *const SpeclabCoupling,
    buf: *mut f64,
    cap: usize,
    out_len: *mut usize,
) -> SpeclabStatus {
    guard(|| {
        let h = in_ref(h, "coupling")?;
        let mus: Vec<f64> = check(branch_mus(&h.0))?
            .into_iter()
            .map(|(_, mu)| match mu {
                Mu::Finite(v) => v,
                Mu::Infinite => f64::INFINITY,
            })
            .collect();
        copy_out(&mus, buf, cap, out_len)
    })
}

/// Transition kind per branch, in the order of [`speclab_branch_mus`].
///
/// # Safety
/// As for [`speclab_branch_mus`].
#[no_mangle]
pub unsafe extern "C" fn speclab_classify(
    h: *const SpeclabCoupling,
    tol: f64,
    buf: *mut SpeclabKind,
    cap: usize,
    out_len: *mut usize,
) -> SpeclabStatus {
    guard(|| {
        let h = in_ref(h, "coupling")?;
        let kinds: Vec<SpeclabKind> = check(classify(&h.0, tol))?
            .into_iter()
            .map(|c| match c.kind {
                TransitionKind::Subcritical => SpeclabKind::Subcritical,
                TransitionKind::Critical => SpeclabKind::Critical,
                TransitionKind::Supercritical => SpeclabKind::Supercritical,
                TransitionKind::NonpositiveOrDivergent => SpeclabKind::NonpositiveOrDivergent,
            })
            .collect();
        copy_out(&kinds, buf, cap, out_len)
    })
}

/// `alpha` at which a branch becomes critical for the given `beta`, `gamma`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn speclab_critical_alpha(
    beta: f64,
    gamma_re: f64,
    gamma_im: f64,
    out: *mut f64,
) -> SpeclabStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = check(critical_alpha(beta, Complex64::new(gamma_re, gamma_im)))?;
        Ok(())
    })
}

/// Eigenvalues of `H` below `1/2`, each confirmed by the secular defect.
///
/// # Safety
/// `h` must be a live coupling handle and `out` a valid pointer; on success it
/// receives a spectrum handle owned by the caller.
#[no_mangle]
pub unsafe extern "C" fn speclab_h_spectrum(
    h: *const SpeclabCoupling,
    tol: f64,
    n_cap: usize,
    out: *mut *mut SpeclabSpectrum,
) -> SpeclabStatus {
    guard(|| {
        let h = in_ref(h, "coupling")?;
        let out = out_ref(out, "out")?;
        let opts = HSpectrumOptions { tol, policy: policy(n_cap)?, ..Default::default() };
        let r = check(h_eigenvalues_below_threshold(&h.0, &opts))?;
        *out = Box::into_raw(Box::new(SpeclabSpectrum(r)));
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a handle from [`speclab_h_spectrum`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn speclab_spectrum_free(s: *mut SpeclabSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of eigenvalues held by `s`; 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn speclab_spectrum_len(s: *const SpeclabSpectrum) -> usize {
    s.as_ref().map_or(0, |s| s.0.eigenvalues.len())
}

/// Ascending eigenvalues of `s`.
///
/// # Safety
/// `s` must be a live spectrum handle, `buf` must hold `cap` doubles and `out_len` be valid.
#[no_mangle]
pub unsafe extern "C" fn speclab_spectrum_eigenvalues(
    s: *const SpeclabSpectrum,
    buf: *mut f64,
    cap: usize,
    out_len: *mut usize,
) -> SpeclabStatus {
    guard(|| {
        let s = in_ref(s, "spectrum")?;
        copy_out(&s.0.eigenvalues, buf, cap, out_len)
    })
}

/// Largest gap between the Sturm and secular estimates of the eigenvalues.
///
/// # Safety
/// `s` must be a live spectrum handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn speclab_spectrum_agreement(s: *const SpeclabSpectrum, out: *mut f64) -> SpeclabStatus {
    guard(|| {
        let s = in_ref(s, "spectrum")?;
        *out_ref(out, "out")? = s.0.method_agreement.unwrap_or(f64::NAN);
        Ok(())
    })
}

/// Number of eigenvalues of `H` below `1/2 - epsilon`.
///
/// # Safety
/// `h` must be a live coupling handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn speclab_count_below_epsilon(
    h: *const SpeclabCoupling,
    epsilon: f64,
    n_cap: usize,
    out: *mut usize,
) -> SpeclabStatus {
    guard(|| {
        let h = in_ref(h, "coupling")?;
        let out = out_ref(out, "out")?;
        *out = check(count_below_epsilon(&h.0, epsilon, &policy(n_cap)?))?;
        Ok(())
    })
}

/// Eigenvalue count of a Jacobi family relative to `level`, stabilized under
/// doubling. `mu`, `lambda` and `epsilon` are read only by the families using them.
///
/// # Safety
/// `out_count` and `out_n` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn speclab_jacobi_count(
    family: SpeclabFamily,
    mu: f64,
    lambda: f64,
    epsilon: f64,
    level: f64,
    side: SpeclabSide,
    n_cap: usize,
    out_count: *mut usize,
    out_n: *mut usize,
) -> SpeclabStatus {
    guard(|| {
        let out_count = out_ref(out_count, "out_count")?;
        let out_n = out_ref(out_n, "out_n")?;
        let family = match family {
            SpeclabFamily::CalJ0 => JacobiFamily::CalJ0 { mu },
            SpeclabFamily::CalJ => JacobiFamily::CalJ { lambda, mu },
            SpeclabFamily::Jeps => JacobiFamily::Jeps { epsilon },
            SpeclabFamily::J0bar => JacobiFamily::J0bar,
        };
        let side = match side {
            SpeclabSide::Plus => Side::Plus,
            SpeclabSide::Minus => Side::Minus,
        };
        let (count, n) = check(count_stabilized(&family, level, side, &policy(n_cap)?))?;
        *out_count = count;
        *out_n = n;
        Ok(())
    })
}

/// Secular defect at complex `lambda`, normalized at depth `n`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn speclab_secular_defect(
    mu: f64,
    lambda_re: f64,
    lambda_im: f64,
    n: usize,
    out: *mut f64,
) -> SpeclabStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = check(secular_defect(mu, Complex64::new(lambda_re, lambda_im), n))?;
        Ok(())
    })
}
