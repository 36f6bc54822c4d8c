//! C ABI over `wcs-core`.
//!
//! Every function returns a [`WcsStatus`]; on failure the message is available
//! from [`wcs_last_error_message`] on the same thread. Objects are opaque
//! handles released with their `_free` function. Strings returned through
//! `out` parameters are owned by the caller and released with
//! [`wcs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use wcs_core::config::resolve_model;
use wcs_core::stability::{self, Lambda1Mode, StabilityReport, Verdict, VerdictOptions};
use wcs_core::sturm_liouville::{solve_fd, solve_shooting, SpectralResult, SturmLiouvilleProblem};
use wcs_core::surfaces::{l1_spectrum, parse_surface, MinimalHypersurface};
use wcs_core::{Error, WarpedModel};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WcsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownName = 3,
    Config = 4,
    Unsupported = 5,
    SolverFailure = 6,
    Io = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WcsMethod {
    FiniteDifference = 0,
    Shooting = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WcsVerdict {
    Unstable = 0,
    StableUnderFixedBoundaryNormalVariations = 1,
    NotDecidedByCriterion = 2,
}

/// Verdict settings. `tau <= 0` selects the exact λ₁; `tau > 0` the upper
/// estimate with that parameter.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct WcsVerdictOptions {
    pub grid_size: usize,
    pub shooting_tol: f64,
    pub cross_check: bool,
    pub tau: f64,
}

pub struct WcsModel(WarpedModel);
pub struct WcsSurface(MinimalHypersurface);
pub struct WcsSpectrum(SpectralResult);
pub struct WcsReport(StabilityReport);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> WcsStatus {
    match e {
        Error::UnknownModel(_) | Error::UnknownSurface(_) => WcsStatus::UnknownName,
        Error::Config(_) | Error::Expression { .. } | Error::ModelRejected { .. } => {
            WcsStatus::Config
        }
        Error::Unsupported(_) | Error::IncompatibleFiber { .. } => WcsStatus::Unsupported,
        Error::Io(_) => WcsStatus::Io,
        e if e.is_solver_failure() => WcsStatus::SolverFailure,
        _ => WcsStatus::InvalidArgument,
    }
}

struct Fail(WcsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> WcsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            WcsStatus::Ok
        }
        Ok(Err(Fail(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal panic: {message}"));
            WcsStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(WcsStatus::NullPointer, "null pointer argument".into())
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Fail(
            WcsStatus::InvalidArgument,
            "string argument is not UTF-8".into(),
        )
    })
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(WcsStatus::InvalidArgument, "interior NUL".into()))?;
    put(out, c.into_raw())
}

unsafe fn free_box<T>(p: *mut T) {
    if !p.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(p))));
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn wcs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn wcs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builtin model by name, or a model TOML file when `name` looks like a path.
/// `n = 0` keeps the default (or the file's) dimension.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcs_model_new(
    name: *const c_char,
    n: usize,
    out: *mut *mut WcsModel,
) -> WcsStatus {
    guard(|| {
        let spec = str_arg(name)?;
        let model = resolve_model(spec, (n > 0).then_some(n))?;
        put(out, Box::into_raw(Box::new(WcsModel(model))))
    })
}

/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcs_model_from_file(
    path: *const c_char,
    out: *mut *mut WcsModel,
) -> WcsStatus {
    guard(|| {
        let path = str_arg(path)?;
        let model = wcs_core::config::load_model(Path::new(path))?;
        put(out, Box::into_raw(Box::new(WcsModel(model))))
    })
}

/// # Safety
/// `model` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn wcs_model_free(model: *mut WcsModel) {
    free_box(model);
}

/// `f(t)`, `f'(t)` and `f''(t)`; any output pointer may be null.
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn wcs_model_eval(
    model: *const WcsModel,
    t: f64,
    f: *mut f64,
    f_prime: *mut f64,
    f_second: *mut f64,
) -> WcsStatus {
    guard(|| {
        let m = &handle(model)?.0;
        for (p, v) in [
            (f, m.f(t)),
            (f_prime, m.f_prime(t)),
            (f_second, m.f_second(t)),
        ] {
            if !p.is_null() {
                p.write(v);
            }
        }
        Ok(())
    })
}

/// # Safety
/// `model` must be a live handle and the outputs writable.
#[no_mangle]
pub unsafe extern "C" fn wcs_model_info(
    model: *const WcsModel,
    n: *mut usize,
    c: *mut f64,
    eps_max: *mut f64,
) -> WcsStatus {
    guard(|| {
        let m = &handle(model)?.0;
        put(n, m.n())?;
        put(c, m.c())?;
        put(eps_max, m.eps_max())
    })
}

/// # Safety
/// `spec` must be a NUL-terminated string such as `"clifford:2,1"` and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcs_surface_new(
    spec: *const c_char,
    out: *mut *mut WcsSurface,
) -> WcsStatus {
    guard(|| {
        let s = parse_surface(str_arg(spec)?)?;
        put(out, Box::into_raw(Box::new(WcsSurface(s))))
    })
}

/// # Safety
/// `surface` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn wcs_surface_free(surface: *mut WcsSurface) {
    free_box(surface);
}

/// First eigenvalue of `−Δ − ‖A‖²`.
///
/// # Safety
/// `surface` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcs_surface_lambda1(
    surface: *const WcsSurface,
    out: *mut f64,
) -> WcsStatus {
    guard(|| {
        let s = &handle(surface)?.0;
        put(out, l1_spectrum(s, 1)?.lambda1())
    })
}

/// Axial eigenvalues on `[−eps, 0]`. `grid_size` is used by finite
/// differences, `tol` by shooting.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcs_spectrum_solve(
    model: *const WcsModel,
    eps: f64,
    num_eigen: usize,
    method: WcsMethod,
    grid_size: usize,
    tol: f64,
    out: *mut *mut WcsSpectrum,
) -> WcsStatus {
    guard(|| {
        let m = &handle(model)?.0;
        let problem = SturmLiouvilleProblem::new(m, eps, num_eigen)?;
        let result = match method {
            WcsMethod::FiniteDifference => solve_fd(&problem, grid_size)?,
            WcsMethod::Shooting => solve_shooting(&problem, tol)?,
        };
        put(out, Box::into_raw(Box::new(WcsSpectrum(result))))
    })
}

/// # Safety
/// `spectrum` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn wcs_spectrum_free(spectrum: *mut WcsSpectrum) {
    free_box(spectrum);
}

/// # Safety
/// `spectrum` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcs_spectrum_count(
    spectrum: *const WcsSpectrum,
    out: *mut usize,
) -> WcsStatus {
    guard(|| put(out, handle(spectrum)?.0.eigenvalues.len()))
}

/// Eigenvalue `index` (0-based).
///
/// # Safety
/// `spectrum` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcs_spectrum_eigenvalue(
    spectrum: *const WcsSpectrum,
    index: usize,
    out: *mut f64,
) -> WcsStatus {
    guard(|| {
        let values = &handle(spectrum)?.0.eigenvalues;
        let v = values.get(index).ok_or_else(|| {
            Fail(
                WcsStatus::InvalidArgument,
                format!("index {index} out of range ({} eigenvalues)", values.len()),
            )
        })?;
        put(out, *v)
    })
}

/// # Safety
/// `spectrum` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcs_spectrum_to_json(
    spectrum: *const WcsSpectrum,
    out: *mut *mut c_char,
) -> WcsStatus {
    guard(|| put_string(out, handle(spectrum)?.0.to_json()))
}

/// Defaults matching the command line.
#[no_mangle]
pub extern "C" fn wcs_verdict_options_default() -> WcsVerdictOptions {
    let d = VerdictOptions::default();
    WcsVerdictOptions {
        grid_size: d.grid_size,
        shooting_tol: d.shooting_tol,
        cross_check: d.cross_check,
        tau: 0.0,
    }
}

/// `λ₁ + δ₁` for the cone of depth `eps` over `surface`. `options` may be null.
///
/// # Safety
/// `model` and `surface` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcs_verdict(
    model: *const WcsModel,
    surface: *const WcsSurface,
    eps: f64,
    options: *const WcsVerdictOptions,
    out: *mut *mut WcsReport,
) -> WcsStatus {
    guard(|| {
        let m = &handle(model)?.0;
        let s = &handle(surface)?.0;
        let o = options
            .as_ref()
            .copied()
            .unwrap_or_else(|| wcs_verdict_options_default());
        let opts = VerdictOptions {
            grid_size: o.grid_size,
            shooting_tol: o.shooting_tol,
            cross_check: o.cross_check,
            lambda1_mode: if o.tau > 0.0 {
                Lambda1Mode::Bound { tau: o.tau }
            } else {
                Lambda1Mode::Exact
            },
            ..VerdictOptions::default()
        };
        let report = stability::verdict(m, s, eps, &opts)?;
        put(out, Box::into_raw(Box::new(WcsReport(report))))
    })
}

/// # Safety
/// `report` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn wcs_report_free(report: *mut WcsReport) {
    free_box(report);
}

/// Any output pointer may be null.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn wcs_report_values(
    report: *const WcsReport,
    lambda1: *mut f64,
    delta1: *mut f64,
    sum: *mut f64,
    verdict: *mut WcsVerdict,
) -> WcsStatus {
    guard(|| {
        let r = &handle(report)?.0;
        for (p, v) in [
            (lambda1, r.lambda1.value),
            (delta1, r.delta1.value),
            (sum, r.sum),
        ] {
            if !p.is_null() {
                p.write(v);
            }
        }
        if !verdict.is_null() {
            verdict.write(match r.verdict {
                Verdict::Unstable => WcsVerdict::Unstable,
                Verdict::StableUnderFixedBoundaryNormalVariations => {
                    WcsVerdict::StableUnderFixedBoundaryNormalVariations
                }
                Verdict::NotDecidedByCriterion => WcsVerdict::NotDecidedByCriterion,
            });
        }
        Ok(())
    })
}

/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn wcs_report_to_json(
    report: *const WcsReport,
    out: *mut *mut c_char,
) -> WcsStatus {
    guard(|| put_string(out, handle(report)?.0.to_json()))
}

/// Closed-form bound `n²/8 − 2n + 2`.
#[no_mangle]
pub extern "C" fn wcs_paper_bound(n: usize) -> f64 {
    stability::paper_bound(n)
}
