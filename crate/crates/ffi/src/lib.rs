//! C ABI over `rankare`.
//!
//! Every function returns a [`RankareStatus`]; results go through out
//! pointers. On failure the message is available from
//! [`rankare_last_error_message`] on the same thread. Handles created by a
//! `*_parse` function must be released with the matching `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rankare::efficiency::{are_nonserial_tol, are_serial_tol, hl_limit, AreReport, Quantity};
use rankare::serial_stats::{self, AutocorrResult, MomentMethod, Statistic};
use rankare::{Density, Error, Score};

/// Status codes. `RANKARE_STATUS_OK` is zero; everything else is a failure.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankareStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Domain = 3,
    Divergence = 4,
    NonConvergence = 5,
    Precondition = 6,
    OutsideF2 = 7,
    Unsupported = 8,
    Shape = 9,
    ExtrapolationUnstable = 10,
    NoBracket = 11,
    Ties = 12,
    BudgetExceeded = 13,
    Io = 14,
    Panic = 15,
}

impl From<&Error> for RankareStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => RankareStatus::Domain,
            Error::Divergence(_) => RankareStatus::Divergence,
            Error::NonConvergence { .. } => RankareStatus::NonConvergence,
            Error::Precondition(_) => RankareStatus::Precondition,
            Error::OutsideF2(_) => RankareStatus::OutsideF2,
            Error::Unsupported(_) => RankareStatus::Unsupported,
            Error::Shape(_) => RankareStatus::Shape,
            Error::ExtrapolationUnstable { .. } => RankareStatus::ExtrapolationUnstable,
            Error::NoBracket(_) => RankareStatus::NoBracket,
            Error::Ties { .. } => RankareStatus::Ties,
            Error::BudgetExceeded(_) => RankareStatus::BudgetExceeded,
            Error::Parse(_) => RankareStatus::Parse,
            Error::Io(_) => RankareStatus::Io,
        }
    }
}

/// Which Wilcoxon / van der Waerden quantity [`rankare_hl_limit`] returns.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankareQuantity {
    C = 0,
    D = 1,
    Are = 2,
    AreSerial = 3,
}

impl From<RankareQuantity> for Quantity {
    fn from(q: RankareQuantity) -> Self {
        match q {
            RankareQuantity::C => Quantity::C,
            RankareQuantity::D => Quantity::D,
            RankareQuantity::Are => Quantity::Are,
            RankareQuantity::AreSerial => Quantity::AreSerial,
        }
    }
}

/// Opaque density handle.
pub struct RankareDensity(Density);

/// Opaque score-generating function handle.
pub struct RankareScore(Score);

/// Efficiency report. Serial-only fields are NaN for a nonserial report.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankareAreReport {
    pub c_f: f64,
    pub d_f: f64,
    pub k_ratio_nonserial: f64,
    pub k_ratio_serial: f64,
    pub are: f64,
    pub abs_err: f64,
    pub serial: bool,
    pub outside_f2: bool,
}

impl From<AreReport> for RankareAreReport {
    fn from(r: AreReport) -> Self {
        RankareAreReport {
            c_f: r.c_f,
            d_f: r.d_f.unwrap_or(f64::NAN),
            k_ratio_nonserial: r.k_ratio_nonserial,
            k_ratio_serial: r.k_ratio_serial.unwrap_or(f64::NAN),
            are: r.are,
            abs_err: r.abs_err,
            serial: r.serial,
            outside_f2: r.outside_f2,
        }
    }
}

/// Rank autocorrelation at one lag with its permutation moments.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankareAutocorr {
    pub lag: usize,
    pub raw: f64,
    pub mean: f64,
    pub sd: f64,
    pub standardized: f64,
    /// True when the moments come from full enumeration, false for Monte Carlo.
    pub exact: bool,
}

impl From<AutocorrResult> for RankareAutocorr {
    fn from(r: AutocorrResult) -> Self {
        RankareAutocorr {
            lag: r.lag,
            raw: r.raw,
            mean: r.mean,
            sd: r.sd,
            standardized: r.standardized,
            exact: r.method == MomentMethod::ExactEnumeration,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(RankareStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(RankareStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, records any error or panic and converts it to a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> RankareStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => RankareStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            RankareStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(RankareStatus::Parse, format!("{what} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn series_arg<'a>(data: *const f64, n: usize) -> Result<&'a [f64], Failure> {
    if n == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null("data"));
    }
    Ok(std::slice::from_raw_parts(data, n))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rankare_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or NULL if the last call
/// succeeded. Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn rankare_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a density such as `gaussian`, `student:4` or `hl:0.01:0.5`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rankare_density_parse(spec: *const c_char, out: *mut *mut RankareDensity) -> RankareStatus {
    guard(|| {
        let d: Density = str_arg(spec, "spec")?.parse()?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        out.write(Box::into_raw(Box::new(RankareDensity(d))));
        Ok(())
    })
}

/// Releases a density handle. NULL is ignored.
///
/// # Safety
/// `d` must come from [`rankare_density_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rankare_density_free(d: *mut RankareDensity) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rankare_density_pdf(d: *const RankareDensity, x: f64, out: *mut f64) -> RankareStatus {
    guard(|| write_out(out, ref_arg(d, "density")?.0.pdf(x)))
}

/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rankare_density_cdf(d: *const RankareDensity, x: f64, out: *mut f64) -> RankareStatus {
    guard(|| write_out(out, ref_arg(d, "density")?.0.cdf(x)))
}

/// # Safety
/// `d` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rankare_density_quantile(d: *const RankareDensity, u: f64, out: *mut f64) -> RankareStatus {
    guard(|| {
        let q = ref_arg(d, "density")?.0.quantile(u)?;
        write_out(out, q)
    })
}

/// Parses a score such as `wilcoxon`, `vdw`, `student:2` or `optimal:powerexp:3`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rankare_score_parse(spec: *const c_char, out: *mut *mut RankareScore) -> RankareStatus {
    guard(|| {
        let j: Score = str_arg(spec, "spec")?.parse()?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        out.write(Box::into_raw(Box::new(RankareScore(j))));
        Ok(())
    })
}

/// Releases a score handle. NULL is ignored.
///
/// # Safety
/// `j` must come from [`rankare_score_parse`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn rankare_score_free(j: *mut RankareScore) {
    if !j.is_null() {
        drop(Box::from_raw(j));
    }
}

/// Evaluates the score at `u` in (0, 1).
///
/// # Safety
/// `j` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rankare_score_eval(j: *const RankareScore, u: f64, out: *mut f64) -> RankareStatus {
    guard(|| {
        let v = ref_arg(j, "score")?.0.eval(u)?;
        write_out(out, v)
    })
}

/// Nonserial efficiency of `j1` relative to `j2` under `f`.
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rankare_are_nonserial(
    j1: *const RankareScore,
    j2: *const RankareScore,
    f: *const RankareDensity,
    tol: f64,
    out: *mut RankareAreReport,
) -> RankareStatus {
    guard(|| {
        let r = are_nonserial_tol(&ref_arg(j1, "j1")?.0, &ref_arg(j2, "j2")?.0, &ref_arg(f, "density")?.0, tol)?;
        write_out(out, r.into())
    })
}

/// Serial efficiency of the statistic with scores `(j1, j2)` relative to the
/// one with `(j3, j4)` under `f`. Infinite-variance densities set
/// `outside_f2` rather than failing.
///
/// # Safety
/// All handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rankare_are_serial(
    j1: *const RankareScore,
    j2: *const RankareScore,
    j3: *const RankareScore,
    j4: *const RankareScore,
    f: *const RankareDensity,
    tol: f64,
    out: *mut RankareAreReport,
) -> RankareStatus {
    guard(|| {
        let r = are_serial_tol(
            &ref_arg(j1, "j1")?.0,
            &ref_arg(j2, "j2")?.0,
            &ref_arg(j3, "j3")?.0,
            &ref_arg(j4, "j4")?.0,
            &ref_arg(f, "density")?.0,
            tol,
        )?;
        write_out(out, r.into())
    })
}

/// Hodges–Lehmann limit `a -> 0` of a Wilcoxon / van der Waerden quantity.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rankare_hl_limit(eps: f64, quantity: RankareQuantity, out: *mut f64) -> RankareStatus {
    guard(|| {
        let v = hl_limit(eps, quantity.into())?;
        write_out(out, v)
    })
}

/// Rank autocorrelation of `data[0..n]` at `lag` for a statistic named like
/// the CLI `--stat` option (`vdw`, `sww`, `kendall` or `J1*J2`). Ties are
/// rejected.
///
/// # Safety
/// `data` must point to `n` doubles; `statistic` must be a NUL-terminated
/// string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rankare_autocorr(
    data: *const f64,
    n: usize,
    lag: usize,
    statistic: *const c_char,
    out: *mut RankareAutocorr,
) -> RankareStatus {
    guard(|| {
        let stat: Statistic = str_arg(statistic, "statistic")?.parse()?;
        let r = serial_stats::ranks(series_arg(data, n)?)?;
        let res = serial_stats::autocorr(&r, lag, &stat)?;
        write_out(out, res.into())
    })
}

/// Rank autocorrelation with score handles `j1` (current) and `j2` (lagged).
///
/// # Safety
/// `data` must point to `n` doubles; handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rankare_rank_autocorr(
    data: *const f64,
    n: usize,
    lag: usize,
    j1: *const RankareScore,
    j2: *const RankareScore,
    out: *mut RankareAutocorr,
) -> RankareStatus {
    guard(|| {
        let r = serial_stats::ranks(series_arg(data, n)?)?;
        let res = serial_stats::rank_autocorr(&r, lag, &ref_arg(j1, "j1")?.0, &ref_arg(j2, "j2")?.0)?;
        write_out(out, res.into())
    })
}
