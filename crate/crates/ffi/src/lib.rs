//! C ABI over the `hardy-opa` solver.
//!
//! Functions and solve results are exposed as opaque handles that the caller
//! releases with the matching `*_free` function. Every fallible call returns a
//! [`HopaStatus`]; on failure a description is available from
//! [`hopa_last_error_message`] until the next failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hardy_opa::fspec::parse_function;
use hardy_opa::harness::{audit, write_json};
use hardy_opa::solver::{linear_factor, solve};
use hardy_opa::{BlaschkeProduct, HpFunction, OpaError, OpaResult, SolverOptions, TaylorPoly};
use num_complex::Complex64;

/// Result codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HopaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Degenerate = 4,
    NotApplicable = 5,
    BufferTooSmall = 6,
    Internal = 7,
    Panic = 8,
}

impl From<&OpaError> for HopaStatus {
    fn from(err: &OpaError) -> Self {
        match err {
            OpaError::InvalidExponent(_)
            | OpaError::Domain(_)
            | OpaError::SizeMismatch { .. }
            | OpaError::Precondition(_)
            | OpaError::Unsatisfiable(_) => HopaStatus::InvalidArgument,
            OpaError::Parse(_) => HopaStatus::Parse,
            OpaError::Degenerate(_) | OpaError::ConstantOpa => HopaStatus::Degenerate,
            OpaError::NotApplicable(_) => HopaStatus::NotApplicable,
            OpaError::Io(_) | OpaError::Json(_) | OpaError::Csv(_) => HopaStatus::Internal,
        }
    }
}

/// Solver settings mirrored from the library defaults.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct HopaSolverOptions {
    /// Iteration budget of the Newton solver.
    pub max_iters: usize,
    /// Threshold on the maximum relative orthogonality residual.
    pub grad_tol: f64,
    /// Start from the `p = 2` solution instead of the zero polynomial.
    pub warm_start: bool,
}

/// An analytic function sampled on the boundary grid.
pub struct HopaFunction(HpFunction);

/// The outcome of one approximant solve.
pub struct HopaResult(OpaResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(message).ok());
}

fn fail(status: HopaStatus, message: impl Into<String>) -> HopaStatus {
    set_last_error(message);
    status
}

fn from_core(err: OpaError) -> HopaStatus {
    fail(HopaStatus::from(&err), err.to_string())
}

/// Runs `body`, converting panics into [`HopaStatus::Panic`].
fn guard(body: impl FnOnce() -> HopaStatus) -> HopaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(HopaStatus::Panic, format!("panic: {message}"))
        }
    }
}

fn options(opts: *const HopaSolverOptions) -> SolverOptions {
    let mut out = SolverOptions::default();
    // SAFETY: the caller passes either null or a valid options struct.
    if let Some(o) = unsafe { opts.as_ref() } {
        out.max_iters = o.max_iters;
        out.grad_tol = o.grad_tol;
        out.warm_start = o.warm_start;
    }
    out
}

/// Reads `len` complex numbers from split real/imaginary arrays.
///
/// # Safety
/// Both pointers must reference at least `len` readable doubles.
unsafe fn complex_slice(re: *const f64, im: *const f64, len: usize) -> Option<Vec<Complex64>> {
    if len == 0 {
        return Some(Vec::new());
    }
    if re.is_null() || im.is_null() {
        return None;
    }
    let (re, im) = unsafe {
        (
            std::slice::from_raw_parts(re, len),
            std::slice::from_raw_parts(im, len),
        )
    };
    Some(
        re.iter()
            .zip(im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect(),
    )
}

fn emit_function(f: hardy_opa::Result<HpFunction>, out: *mut *mut HopaFunction) -> HopaStatus {
    match f {
        Ok(f) => {
            // SAFETY: `out` was checked for null by the caller.
            unsafe { *out = Box::into_raw(Box::new(HopaFunction(f))) };
            HopaStatus::Ok
        }
        Err(e) => from_core(e),
    }
}

/// The message of the most recent failure on this thread, or null.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hopa_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// The library's default solver settings.
#[no_mangle]
pub extern "C" fn hopa_solver_options_default() -> HopaSolverOptions {
    let d = SolverOptions::default();
    HopaSolverOptions {
        max_iters: d.max_iters,
        grad_tol: d.grad_tol,
        warm_start: d.warm_start,
    }
}

/// Parses a function spec such as `poly:1,-0.5` or `blaschke:0.5,0.3i`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn hopa_function_parse(
    spec: *const c_char,
    grid: usize,
    out: *mut *mut HopaFunction,
) -> HopaStatus {
    guard(|| {
        if spec.is_null() || out.is_null() {
            return fail(HopaStatus::NullPointer, "spec and out must be non-null");
        }
        let Ok(text) = unsafe { CStr::from_ptr(spec) }.to_str() else {
            return fail(HopaStatus::Parse, "spec is not valid UTF-8");
        };
        emit_function(parse_function(text, grid), out)
    })
}

/// Builds the polynomial with Taylor coefficients `re[k] + i im[k]`.
///
/// # Safety
/// `re` and `im` must hold `len` doubles; `out` must be a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn hopa_function_poly(
    re: *const f64,
    im: *const f64,
    len: usize,
    grid: usize,
    out: *mut *mut HopaFunction,
) -> HopaStatus {
    guard(|| {
        if out.is_null() {
            return fail(HopaStatus::NullPointer, "out must be non-null");
        }
        let Some(coeffs) = (unsafe { complex_slice(re, im, len) }) else {
            return fail(
                HopaStatus::NullPointer,
                "coefficient arrays must be non-null",
            );
        };
        emit_function(
            TaylorPoly::new(coeffs).and_then(|q| HpFunction::poly(q, grid)),
            out,
        )
    })
}

/// Builds the Blaschke product with zeros `re[k] + i im[k]`.
///
/// # Safety
/// `re` and `im` must hold `len` doubles; `out` must be a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn hopa_function_blaschke(
    re: *const f64,
    im: *const f64,
    len: usize,
    grid: usize,
    out: *mut *mut HopaFunction,
) -> HopaStatus {
    guard(|| {
        if out.is_null() {
            return fail(HopaStatus::NullPointer, "out must be non-null");
        }
        let Some(zeros) = (unsafe { complex_slice(re, im, len) }) else {
            return fail(HopaStatus::NullPointer, "zero arrays must be non-null");
        };
        emit_function(
            BlaschkeProduct::new(zeros).and_then(|b| HpFunction::blaschke(b, grid)),
            out,
        )
    })
}

/// Releases a function handle; null is ignored.
///
/// # Safety
/// `f` must come from a `hopa_function_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hopa_function_free(f: *mut HopaFunction) {
    if !f.is_null() {
        drop(unsafe { Box::from_raw(f) });
    }
}

/// Solves for the degree-`n` approximant of `f` in the `p`-norm.
///
/// `opts` may be null for the defaults. A solve that stops before converging
/// still succeeds; query [`hopa_result_converged`].
///
/// # Safety
/// `f` must be a live function handle and `out` a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn hopa_solve(
    f: *const HopaFunction,
    n: usize,
    p: f64,
    opts: *const HopaSolverOptions,
    out: *mut *mut HopaResult,
) -> HopaStatus {
    guard(|| {
        let Some(f) = (unsafe { f.as_ref() }) else {
            return fail(HopaStatus::NullPointer, "function handle is null");
        };
        if out.is_null() {
            return fail(HopaStatus::NullPointer, "out must be non-null");
        }
        match solve(&f.0, n, p, &options(opts)) {
            Ok(res) => {
                unsafe { *out = Box::into_raw(Box::new(HopaResult(res))) };
                HopaStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Releases a result handle; null is ignored.
///
/// # Safety
/// `res` must come from [`hopa_solve`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hopa_result_free(res: *mut HopaResult) {
    if !res.is_null() {
        drop(unsafe { Box::from_raw(res) });
    }
}

/// The requested degree `n`; the approximant has `n + 1` coefficients.
///
/// # Safety
/// `res` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn hopa_result_degree(res: *const HopaResult) -> usize {
    unsafe { res.as_ref() }.map_or(0, |r| r.0.n)
}

/// The residual `||q f - 1||_p`, or NaN for a null handle.
///
/// # Safety
/// `res` must be a live result handle or null.
#[no_mangle]
pub unsafe extern "C" fn hopa_result_residual(res: *const HopaResult) -> f64 {
    unsafe { res.as_ref() }.map_or(f64::NAN, |r| r.0.residual_norm)
}

/// The largest orthogonality residual over the monomial shifts, or NaN.
///
/// # Safety
/// `res` must be a live result handle or null.
#[no_mangle]
pub unsafe extern "C" fn hopa_result_max_orth_residual(res: *const HopaResult) -> f64 {
    unsafe { res.as_ref() }.map_or(f64::NAN, |r| r.0.max_orth_residual())
}

/// Whether the solver met its stopping criterion.
///
/// # Safety
/// `res` must be a live result handle or null.
#[no_mangle]
pub unsafe extern "C" fn hopa_result_converged(res: *const HopaResult) -> bool {
    unsafe { res.as_ref() }.is_some_and(|r| r.0.converged)
}

/// Newton iterations the solve used.
///
/// # Safety
/// `res` must be a live result handle or null.
#[no_mangle]
pub unsafe extern "C" fn hopa_result_iterations(res: *const HopaResult) -> usize {
    unsafe { res.as_ref() }.map_or(0, |r| r.0.iterations)
}

/// Copies the `n + 1` approximant coefficients into `re` and `im`.
///
/// # Safety
/// `res` must be a live result handle; `re` and `im` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn hopa_result_coeffs(
    res: *const HopaResult,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> HopaStatus {
    guard(|| {
        let Some(r) = (unsafe { res.as_ref() }) else {
            return fail(HopaStatus::NullPointer, "result handle is null");
        };
        if re.is_null() || im.is_null() {
            return fail(HopaStatus::NullPointer, "output arrays must be non-null");
        }
        let need = r.0.n + 1;
        if len < need {
            return fail(
                HopaStatus::BufferTooSmall,
                format!("need {need} slots, got {len}"),
            );
        }
        for k in 0..need {
            let c = r.0.coeffs.coeff(k);
            unsafe {
                *re.add(k) = c.re;
                *im.add(k) = c.im;
            }
        }
        HopaStatus::Ok
    })
}

/// Writes the factorization `q(z) = a (z - w)` of a degree-1 approximant.
///
/// Fails with [`HopaStatus::Degenerate`] when the approximant is constant.
///
/// # Safety
/// `res` must be a live result handle; the four outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn hopa_linear_factor(
    res: *const HopaResult,
    a_re: *mut f64,
    a_im: *mut f64,
    w_re: *mut f64,
    w_im: *mut f64,
) -> HopaStatus {
    guard(|| {
        let Some(r) = (unsafe { res.as_ref() }) else {
            return fail(HopaStatus::NullPointer, "result handle is null");
        };
        if a_re.is_null() || a_im.is_null() || w_re.is_null() || w_im.is_null() {
            return fail(HopaStatus::NullPointer, "outputs must be non-null");
        }
        match linear_factor(&r.0) {
            Ok(lin) => {
                unsafe {
                    *a_re = lin.a.re;
                    *a_im = lin.a.im;
                    *w_re = lin.w.re;
                    *w_im = lin.w.im;
                }
                HopaStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}

/// Solves and audits `f`, returning the JSON document as a new string.
///
/// Free the string with [`hopa_string_free`].
///
/// # Safety
/// `f` must be a live function handle; `opts` may be null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hopa_audit_json(
    f: *const HopaFunction,
    n: usize,
    p: f64,
    opts: *const HopaSolverOptions,
    out: *mut *mut c_char,
) -> HopaStatus {
    guard(|| {
        let Some(f) = (unsafe { f.as_ref() }) else {
            return fail(HopaStatus::NullPointer, "function handle is null");
        };
        if out.is_null() {
            return fail(HopaStatus::NullPointer, "out must be non-null");
        }
        let record = match audit(&f.0, p, n, &options(opts)) {
            Ok(r) => r,
            Err(e) => return from_core(e),
        };
        let mut buf = Vec::new();
        if let Err(e) = write_json(
            &mut buf,
            "ffi audit",
            std::slice::from_ref(&record),
            None::<&()>,
        ) {
            return from_core(e);
        }
        match CString::new(buf) {
            Ok(s) => {
                unsafe { *out = s.into_raw() };
                HopaStatus::Ok
            }
            Err(_) => fail(HopaStatus::Internal, "JSON output contained a NUL byte"),
        }
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from [`hopa_audit_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn hopa_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
