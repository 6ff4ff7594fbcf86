//! C interface to `compack`.
//!
//! Every function returns a [`CompackStatus`]. On failure the message is kept
//! per thread and read with [`compack_last_error`]. Strings handed out by the
//! library are released with [`compack_string_free`]; handles with their own
//! `_free` function. Passing NULL to a `_free` function is a no-op.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use compack::angles::Size;
use compack::contours::{intercept, Status};
use compack::error::Error;
use compack::gamma_search::{search, GammaQuery, SearchOutcome, DEFAULT_BUDGET};
use compack::packing::{build_corona, cycles_of, grow_patch, render_svg, verify, BBox, CoronaRules, GrowOptions, Packing, SvgStyle};
use compack::precision::{to_decimal, Precision};
use compack::tuples::{enumerate_k_scoped, enumerate_snec, AngleCount, CandidatePair, KScope};
use rug::Float;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompackStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Domain = 3,
    Precondition = 4,
    Usage = 5,
    Resource = 6,
    Solver = 7,
    Verification = 8,
    Parse = 9,
    Io = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompackInterceptStatus {
    Found = 0,
    None = 1,
    Ambiguous = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompackGammaOutcome {
    Found = 0,
    ExhaustedNone = 1,
    BudgetExceeded = 2,
}

/// A finite packing.
pub struct CompackPacking {
    inner: Packing,
}

/// Result of a gamma search.
pub struct CompackGammaResult {
    outcome: CompackGammaOutcome,
    nodes: u64,
    xis: Vec<[u32; 6]>,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CompackVerifyReport {
    pub circles: usize,
    pub violations: usize,
    pub tangencies: usize,
    pub interior: usize,
    pub interior_compact: usize,
    pub worst_residual: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CompackStatus {
    match e {
        Error::Domain(_) => CompackStatus::Domain,
        Error::Precondition(_) => CompackStatus::Precondition,
        Error::Usage(_) => CompackStatus::Usage,
        Error::Resource(_) => CompackStatus::Resource,
        Error::Solver(_) => CompackStatus::Solver,
        Error::Verification(_) => CompackStatus::Verification,
        Error::Parse(_) | Error::Json(_) | Error::Csv(_) => CompackStatus::Parse,
        Error::Io(_) => CompackStatus::Io,
    }
}

struct Fail(CompackStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CompackStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CompackStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            CompackStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(CompackStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(CompackStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn tuple(p: *const u32, what: &str) -> Result<AngleCount, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    let mut xi = [0u32; 6];
    xi.copy_from_slice(std::slice::from_raw_parts(p, 6));
    Ok(AngleCount(xi))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

fn owned(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message of the last failure on this thread, or NULL. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn compack_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn compack_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Write the small-circle angle-counts as consecutive 6-tuples into `out`.
///
/// `count` receives the number of tuples. With `out` NULL only the count is written.
///
/// # Safety
/// `out` must hold `capacity * 6` values when not NULL.
#[no_mangle]
pub unsafe extern "C" fn compack_enumerate_s(out: *mut u32, capacity: usize, count: *mut usize) -> CompackStatus {
    guard(|| {
        let all = enumerate_snec();
        put(count, all.len(), "count")?;
        if out.is_null() {
            return Ok(());
        }
        if capacity < all.len() {
            return Err(Fail(CompackStatus::BufferTooSmall, format!("need room for {} tuples", all.len())));
        }
        let dst = std::slice::from_raw_parts_mut(out, all.len() * 6);
        for (chunk, xi) in dst.chunks_mut(6).zip(&all) {
            chunk.copy_from_slice(&xi.0);
        }
        Ok(())
    })
}

/// Number of candidate pairs; `scope` is "full" or "capped".
///
/// # Safety
/// `scope` must be a NUL-terminated string and `count` writable.
#[no_mangle]
pub unsafe extern "C" fn compack_enumerate_k_count(scope: *const c_char, count: *mut usize) -> CompackStatus {
    guard(|| {
        let scope = KScope::parse(text(scope, "scope")?)?;
        put(count, enumerate_k_scoped(scope).len(), "count")
    })
}

/// Intercept of a pair. `r` and `s` receive decimal strings, or NULL when there is no point.
///
/// # Safety
/// `eta` and `zeta` must point to 6 values; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn compack_intercept(
    eta: *const u32,
    zeta: *const u32,
    digits: u32,
    status: *mut CompackInterceptStatus,
    r: *mut *mut c_char,
    s: *mut *mut c_char,
) -> CompackStatus {
    guard(|| {
        let pair = CandidatePair::new(tuple(eta, "eta")?, tuple(zeta, "zeta")?);
        if status.is_null() || r.is_null() || s.is_null() {
            return Err(null("output"));
        }
        let res = intercept(&pair, digits)?;
        let st = match res.status {
            Status::Found => CompackInterceptStatus::Found,
            Status::None => CompackInterceptStatus::None,
            Status::Ambiguous => CompackInterceptStatus::Ambiguous,
        };
        let (rv, sv) = match &res.point {
            Some((a, b)) => (owned(to_decimal(a, digits)), owned(to_decimal(b, digits))),
            None => (ptr::null_mut(), ptr::null_mut()),
        };
        put(status, st, "status")?;
        put(r, rv, "r")?;
        put(s, sv, "s")
    })
}

fn point(r: *const c_char, s: *const c_char, digits: u32) -> Result<(Float, Float), Fail> {
    let p = Precision::new(digits)?;
    let (r, s) = unsafe { (text(r, "r")?, text(s, "s")?) };
    Ok((p.parse(r)?, p.parse(s)?))
}

/// Large-circle angle-counts at `(r, s)` with the default tolerance.
/// A `budget` of 0 selects the default node budget.
///
/// # Safety
/// `r` and `s` must be NUL-terminated decimals; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn compack_gamma_search(
    r: *const c_char,
    s: *const c_char,
    digits: u32,
    budget: u64,
    out: *mut *mut CompackGammaResult,
) -> CompackStatus {
    guard(|| {
        let (r, s) = point(r, s, digits)?;
        let q = GammaQuery::new(r, s, digits)?.with_budget(if budget == 0 { DEFAULT_BUDGET } else { budget });
        let res = search(&q);
        let outcome = match res {
            SearchOutcome::Found { .. } => CompackGammaOutcome::Found,
            SearchOutcome::ExhaustedNone { .. } => CompackGammaOutcome::ExhaustedNone,
            SearchOutcome::BudgetExceeded { .. } => CompackGammaOutcome::BudgetExceeded,
        };
        let h = CompackGammaResult { outcome, nodes: res.nodes(), xis: res.solutions().iter().map(|x| x.xi.0).collect() };
        put(out, Box::into_raw(Box::new(h)), "out")
    })
}

/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn compack_gamma_outcome(h: *const CompackGammaResult) -> CompackGammaOutcome {
    h.as_ref().map_or(CompackGammaOutcome::ExhaustedNone, |h| h.outcome)
}

/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn compack_gamma_nodes(h: *const CompackGammaResult) -> u64 {
    h.as_ref().map_or(0, |h| h.nodes)
}

/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn compack_gamma_count(h: *const CompackGammaResult) -> usize {
    h.as_ref().map_or(0, |h| h.xis.len())
}

/// Copy solution `i` into `xi`.
///
/// # Safety
/// `h` must be a live handle and `xi` hold 6 values.
#[no_mangle]
pub unsafe extern "C" fn compack_gamma_get(h: *const CompackGammaResult, i: usize, xi: *mut u32) -> CompackStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        if xi.is_null() {
            return Err(null("xi"));
        }
        let v = h.xis.get(i).ok_or_else(|| Fail(CompackStatus::Usage, format!("index {i} out of range")))?;
        std::slice::from_raw_parts_mut(xi, 6).copy_from_slice(v);
        Ok(())
    })
}

/// # Safety
/// `h` must come from [`compack_gamma_search`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn compack_gamma_free(h: *mut CompackGammaResult) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Parse a packing from its JSON form.
///
/// # Safety
/// `json` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn compack_packing_from_json(json: *const c_char, digits: u32, out: *mut *mut CompackPacking) -> CompackStatus {
    guard(|| {
        let p = Packing::from_json(text(json, "json")?, digits)?;
        put(out, Box::into_raw(Box::new(CompackPacking { inner: p })), "out")
    })
}

/// Grow a patch for a pair whose intercept exists, seeded with a small-circle corona.
/// `stalled` is set to 1 when growth stopped before covering the region.
///
/// # Safety
/// `eta` and `zeta` must point to 6 values; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn compack_grow(
    eta: *const u32,
    zeta: *const u32,
    digits: u32,
    half: f64,
    out: *mut *mut CompackPacking,
    stalled: *mut i32,
) -> CompackStatus {
    guard(|| {
        let pair = CandidatePair::new(tuple(eta, "eta")?, tuple(zeta, "zeta")?);
        if out.is_null() || stalled.is_null() {
            return Err(null("output"));
        }
        let res = intercept(&pair, digits)?;
        let (r, s) = res.point.ok_or_else(|| Fail(CompackStatus::Domain, "pair has no intercept".into()))?;
        let rules = CoronaRules::discover(&r, &s, digits)?;
        let opts = GrowOptions::new(digits)?;
        let mut seed = None;
        for cyc in cycles_of(&pair.eta)? {
            let c = build_corona(Size::Small, &cyc, &r, &s, &opts.tangency_tol)?;
            if c.closes {
                seed = Some(c.packing);
                break;
            }
        }
        let seed = seed.ok_or_else(|| Fail(CompackStatus::Domain, "no small corona closes".into()))?;
        let grown = grow_patch(&seed, &BBox::square(half), &rules, &opts)?;
        put(stalled, i32::from(grown.stall.is_some()), "stalled")?;
        put(out, Box::into_raw(Box::new(CompackPacking { inner: grown.packing })), "out")
    })
}

/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn compack_packing_len(p: *const CompackPacking) -> usize {
    p.as_ref().map_or(0, |p| p.inner.len())
}

/// JSON form with `digits` significant digits, released with [`compack_string_free`].
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn compack_packing_to_json(p: *const CompackPacking, digits: u32, out: *mut *mut c_char) -> CompackStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("packing"))?;
        put(out, owned(p.inner.to_json(digits)?), "out")
    })
}

/// SVG document, released with [`compack_string_free`].
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn compack_packing_render_svg(p: *const CompackPacking, scale: f64, tangency: i32, out: *mut *mut c_char) -> CompackStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("packing"))?;
        let style = SvgStyle { scale, tangency: tangency != 0, ..SvgStyle::default() };
        put(out, owned(render_svg(&p.inner, &style)), "out")
    })
}

/// Overlap and compactness check at tolerance `tol`.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn compack_packing_verify(p: *const CompackPacking, tol: f64, out: *mut CompackVerifyReport) -> CompackStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("packing"))?;
        let rep = verify(&p.inner, &Float::with_val(p.inner.prec(), tol));
        let v = CompackVerifyReport {
            circles: p.inner.len(),
            violations: rep.violations.len(),
            tangencies: rep.tangencies,
            interior: rep.interior.len(),
            interior_compact: rep.interior.iter().filter(|c| c.1).count(),
            worst_residual: rep.worst_residual,
        };
        put(out, v, "out")
    })
}

/// # Safety
/// `p` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn compack_packing_free(p: *mut CompackPacking) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}
