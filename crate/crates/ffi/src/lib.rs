//! C ABI for the quelab kernels.
//!
//! Every entry point returns a [`QuelabStatus`]; results go through out
//! pointers. Evaluators and experiments are opaque heap handles released with
//! their `_free` functions. On failure the message is kept per thread and can
//! be copied out with [`quelab_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use quelab::cli::{csv_string, run_experiment, ExperimentConfig, RunOptions};
use quelab::eisenstein::{lower_bound_avg, EisensteinEvaluator};
use quelab::geometry::{GeodesicBall, HeegnerPoint, Point, PointH2, PointH3, QuadratureOrder};
use quelab::lattice::ImagQuadField;
use quelab::mass::{ball_mass, Integration};
use quelab::selberg::{h_char_real, BallKernel};
use quelab::zeta::{dedekind_zeta, riemann_zeta};
use quelab::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuelabStatus {
    Ok = 0,
    Domain = 1,
    Usage = 2,
    Evaluation = 3,
    Config = 4,
    NullPointer = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuelabComplex {
    pub re: f64,
    pub im: f64,
}

impl From<QuelabComplex> for Complex64 {
    fn from(c: QuelabComplex) -> Self {
        Complex64::new(c.re, c.im)
    }
}

impl From<Complex64> for QuelabComplex {
    fn from(c: Complex64) -> Self {
        QuelabComplex { re: c.re, im: c.im }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuelabMassResult {
    pub raw_mass: f64,
    pub normalized_mass: f64,
    pub main_term: f64,
    pub deviation: f64,
}

/// Eisenstein series on the modular surface or a Bianchi orbifold.
pub struct QuelabEvaluator(EisensteinEvaluator);

/// A validated experiment configuration.
pub struct QuelabExperiment(ExperimentConfig);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QuelabStatus {
    match e {
        Error::Domain(_) => QuelabStatus::Domain,
        Error::Usage(_) => QuelabStatus::Usage,
        Error::Evaluation(_) => QuelabStatus::Evaluation,
        Error::Config(_) => QuelabStatus::Config,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
    Utf8,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> QuelabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QuelabStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            let s = status_of(&e);
            set_error(e.to_string());
            s
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            QuelabStatus::NullPointer
        }
        Ok(Err(Fail::Utf8)) => {
            set_error("string argument is not valid UTF-8".into());
            QuelabStatus::InvalidUtf8
        }
        Err(_) => {
            set_error("internal panic".into());
            QuelabStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length, 0 if none.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn quelab_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// # Safety
/// `out_eval` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn quelab_evaluator_new_modular(out_eval: *mut *mut QuelabEvaluator) -> QuelabStatus {
    guard(|| {
        *out(out_eval, "out")? = Box::into_raw(Box::new(QuelabEvaluator(EisensteinEvaluator::modular())));
        Ok(())
    })
}

/// Evaluator over ℚ(√d) for one of the nine class-number-one d.
///
/// # Safety
/// `out_eval` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn quelab_evaluator_new_bianchi(d: i64, out_eval: *mut *mut QuelabEvaluator) -> QuelabStatus {
    guard(|| {
        let o = out(out_eval, "out")?;
        *o = Box::into_raw(Box::new(QuelabEvaluator(EisensteinEvaluator::bianchi(d)?)));
        Ok(())
    })
}

/// # Safety
/// `ev` must be null or a handle from a `quelab_evaluator_new_*` call, freed once.
#[no_mangle]
pub unsafe extern "C" fn quelab_evaluator_free(ev: *mut QuelabEvaluator) {
    if !ev.is_null() {
        drop(Box::from_raw(ev));
    }
}

/// 2 or 3; 0 for a null handle.
///
/// # Safety
/// `ev` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn quelab_evaluator_dimension(ev: *const QuelabEvaluator) -> usize {
    ev.as_ref().map_or(0, |e| e.0.dimension())
}

/// E(x + iy, s) on the modular surface.
///
/// # Safety
/// `ev` must be a live handle and `result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn quelab_eval_h2(
    ev: *const QuelabEvaluator,
    x: f64,
    y: f64,
    s: QuelabComplex,
    result: *mut QuelabComplex,
) -> QuelabStatus {
    guard(|| {
        let ev = handle(ev, "ev")?;
        let r = out(result, "result")?;
        *r = ev.0.eval(&Point::H2(PointH2::new(x, y)?), s.into())?.into();
        Ok(())
    })
}

/// E(z + rj, s) on a Bianchi orbifold.
///
/// # Safety
/// `ev` must be a live handle and `result` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn quelab_eval_h3(
    ev: *const QuelabEvaluator,
    z: QuelabComplex,
    r: f64,
    s: QuelabComplex,
    result: *mut QuelabComplex,
) -> QuelabStatus {
    guard(|| {
        let ev = handle(ev, "ev")?;
        let o = out(result, "result")?;
        *o = ev.0.eval(&Point::H3(PointH3::new(z.into(), r)?), s.into())?.into();
        Ok(())
    })
}

/// Ball mass of |E(·, s_t)|² by tensor Gauss quadrature with `order` nodes
/// per coordinate. `center` holds (x, y) on ℍ² or (Re z, Im z, r) on ℍ³.
///
/// # Safety
/// `ev` must be a live handle, `center` must point to `center_len` doubles
/// and `result` must be valid.
#[no_mangle]
pub unsafe extern "C" fn quelab_ball_mass(
    ev: *const QuelabEvaluator,
    center: *const f64,
    center_len: usize,
    radius: f64,
    t: f64,
    order: usize,
    result: *mut QuelabMassResult,
) -> QuelabStatus {
    guard(|| {
        let ev = handle(ev, "ev")?;
        let o = out(result, "result")?;
        if center.is_null() {
            return Err(Fail::Null("center"));
        }
        let c = std::slice::from_raw_parts(center, center_len);
        let p = match c {
            [x, y] => Point::H2(PointH2::new(*x, *y)?),
            [a, b, r] => Point::H3(PointH3::new(Complex64::new(*a, *b), *r)?),
            _ => return Err(Error::Usage(format!("center must have 2 or 3 coordinates, got {center_len}")).into()),
        };
        if order < 2 {
            return Err(Error::Usage(format!("quadrature order must be at least 2, got {order}")).into());
        }
        let m = ball_mass(&ev.0, &GeodesicBall::new(p, radius)?, t, Integration::Quadrature(QuadratureOrder::uniform(order)))?;
        *o = QuelabMassResult {
            raw_mass: m.raw_mass,
            normalized_mass: m.normalized_mass,
            main_term: m.main_term,
            deviation: m.deviation,
        };
        Ok(())
    })
}

/// Selberg transform h_{R,n}(t) of the normalised ball kernel.
///
/// # Safety
/// `result` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn quelab_h_char(n: usize, radius: f64, t: f64, result: *mut f64) -> QuelabStatus {
    guard(|| {
        let o = out(result, "result")?;
        *o = h_char_real(&BallKernel::new(n, radius)?, t)?;
        Ok(())
    })
}

/// Cauchy–Schwarz lower bound at the Heegner point of the form (a, b, c).
///
/// # Safety
/// `result` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn quelab_lower_bound_avg(
    a: i64,
    b: i64,
    c: i64,
    radius: f64,
    t: f64,
    result: *mut f64,
) -> QuelabStatus {
    guard(|| {
        let o = out(result, "result")?;
        *o = lower_bound_avg(&HeegnerPoint::new(a, b, c)?, radius, t)?;
        Ok(())
    })
}

/// # Safety
/// `result` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn quelab_riemann_zeta(s: QuelabComplex, result: *mut QuelabComplex) -> QuelabStatus {
    guard(|| {
        let o = out(result, "result")?;
        *o = riemann_zeta(s.into())?.into();
        Ok(())
    })
}

/// # Safety
/// `result` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn quelab_dedekind_zeta(d: i64, s: QuelabComplex, result: *mut QuelabComplex) -> QuelabStatus {
    guard(|| {
        let o = out(result, "result")?;
        *o = dedekind_zeta(&ImagQuadField::new(d)?, s.into())?.into();
        Ok(())
    })
}

/// Parses and validates an experiment config given as TOML text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out_exp` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn quelab_experiment_from_toml(text: *const c_char, out_exp: *mut *mut QuelabExperiment) -> QuelabStatus {
    guard(|| {
        let o = out(out_exp, "out")?;
        if text.is_null() {
            return Err(Fail::Null("text"));
        }
        let s = CStr::from_ptr(text).to_str().map_err(|_| Fail::Utf8)?;
        *o = Box::into_raw(Box::new(QuelabExperiment(ExperimentConfig::from_toml(s)?)));
        Ok(())
    })
}

/// # Safety
/// `exp` must be null or a handle from [`quelab_experiment_from_toml`], freed once.
#[no_mangle]
pub unsafe extern "C" fn quelab_experiment_free(exp: *mut QuelabExperiment) {
    if !exp.is_null() {
        drop(Box::from_raw(exp));
    }
}

/// Runs the experiment and returns the CSV table as a string owned by the
/// library (release with [`quelab_string_free`]). `threads` = 0 uses the
/// default pool. Row failures appear in the table's error column.
///
/// # Safety
/// `exp` must be a live handle and `csv` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn quelab_experiment_run(exp: *const QuelabExperiment, threads: usize, csv: *mut *mut c_char) -> QuelabStatus {
    guard(|| {
        let exp = handle(exp, "exp")?;
        let o = out(csv, "csv")?;
        let opts = RunOptions { threads: (threads > 0).then_some(threads), timings: false };
        let table = run_experiment(&exp.0, &opts)?;
        *o = CString::new(csv_string(&table)).expect("CSV has no NUL bytes").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn quelab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
