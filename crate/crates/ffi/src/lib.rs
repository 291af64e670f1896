//! C ABI for `signed-harmonic`.
//!
//! Every object crosses the boundary as an opaque pointer created by a
//! `sh_*_new` style call and released by the matching `sh_*_free`. Calls
//! return an [`ShStatus`]; on failure, [`sh_last_error`] holds a message for
//! the calling thread. Strings handed out by the library are owned by the
//! caller and must be released with [`sh_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::size_t;
use signed_harmonic::analytic::{rho_limit, rho_n, DensityEvaluator};
use signed_harmonic::exact::{min_gap, min_signed_sum, GapResult, SearchResult};
use signed_harmonic::montecarlo::{simulate_with, SimulationConfig};
use signed_harmonic::sequences::{generate, SequenceSpec, SequenceTerms};
use signed_harmonic::{Error, ExactValue};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    CapExceeded = 3,
    OutOfMemory = 4,
    Overflow = 5,
    Unreachable = 6,
    TruncationFailed = 7,
    Panic = 8,
}

/// Sequence families accepted by [`sh_sequence_new`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShKind {
    Primes = 0,
    /// Squarefree products of `k` distinct primes.
    KAlmostSquarefree = 1,
    /// Integers with exactly `k` distinct prime factors.
    KDistinctFactors = 2,
    NonPrimes = 3,
    /// `a, a + q, a + 2q, …`
    ArithmeticProgression = 4,
}

/// Opaque: the first `N` terms of a sequence.
pub struct ShSequence(SequenceTerms);

/// Opaque: a minimal signed sum with its witness.
pub struct ShSearchResult(SearchResult);

/// Opaque: a minimal gap with its witness.
pub struct ShGapResult(GapResult);

/// Opaque: a density evaluator with fixed truncation.
pub struct ShDensity(DensityEvaluator);

/// Monte Carlo summary, filled in by [`sh_simulate`].
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ShSimulationReport {
    pub empirical_prob: f64,
    pub predicted: f64,
    pub standard_error: f64,
    pub z_score: f64,
    pub sample_mean: f64,
    pub sample_variance: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ShStatus {
    match e {
        Error::InvalidSpec(_) | Error::InvalidInput(_) => ShStatus::InvalidInput,
        Error::CapExceeded { .. } => ShStatus::CapExceeded,
        Error::OutOfMemory { .. } => ShStatus::OutOfMemory,
        Error::Overflow(_) => ShStatus::Overflow,
        Error::RangeUnreachable(_) => ShStatus::Unreachable,
        Error::DivergedTruncation(_) | Error::TruncationFailure(_) => ShStatus::TruncationFailed,
    }
}

enum Fail {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ShStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ShStatus::Ok
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(format!("{what} is null"));
            ShStatus::NullPointer
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            ShStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn put<T>(out: *mut T, what: &'static str, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(v);
    Ok(())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

unsafe fn parse_tau(tau: *const c_char) -> Result<ExactValue, Fail> {
    if tau.is_null() {
        return Ok(ExactValue::zero());
    }
    let s = CStr::from_ptr(tau)
        .to_str()
        .map_err(|_| Error::InvalidInput("tau is not UTF-8".into()))?;
    Ok(s.parse()?)
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn sh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn sh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// First `n` terms of a sequence family. `k` applies to the factor-count
/// kinds, `a` and `q` to arithmetic progressions.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sh_sequence_new(
    kind: ShKind,
    k: u32,
    a: u64,
    q: u64,
    n: size_t,
    out: *mut *mut ShSequence,
) -> ShStatus {
    guard(|| {
        let spec = match kind {
            ShKind::Primes => SequenceSpec::Primes,
            ShKind::KAlmostSquarefree => SequenceSpec::KAlmostSquarefree(k),
            ShKind::KDistinctFactors => SequenceSpec::KDistinctFactors(k),
            ShKind::NonPrimes => SequenceSpec::NonPrimes,
            ShKind::ArithmeticProgression => SequenceSpec::ArithmeticProgression { a, q },
        };
        let terms = generate(&spec, n)?;
        put(out, "out", boxed(ShSequence(terms)))
    })
}

/// A sequence from an explicit strictly increasing list of positive terms.
///
/// # Safety
/// `terms` must point to `len` readable values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sh_sequence_from_terms(
    terms: *const u64,
    len: size_t,
    out: *mut *mut ShSequence,
) -> ShStatus {
    guard(|| {
        if terms.is_null() {
            return Err(Fail::Null("terms"));
        }
        let v = std::slice::from_raw_parts(terms, len).to_vec();
        let seq = SequenceTerms::from_custom(v)?;
        put(out, "out", boxed(ShSequence(seq)))
    })
}

/// Number of terms, or 0 for a null handle.
///
/// # Safety
/// `seq` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sh_sequence_len(seq: *const ShSequence) -> size_t {
    seq.as_ref().map_or(0, |s| s.0.len())
}

/// Copies up to `cap` terms into `buf` and returns how many were copied.
///
/// # Safety
/// `seq` must be a live handle and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn sh_sequence_terms(seq: *const ShSequence, buf: *mut u64, cap: size_t) -> size_t {
    let (Some(s), false) = (seq.as_ref(), buf.is_null()) else {
        return 0;
    };
    let n = cap.min(s.0.len());
    ptr::copy_nonoverlapping(s.0.terms.as_ptr(), buf, n);
    n
}

/// # Safety
/// `seq` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn sh_sequence_free(seq: *mut ShSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Exact `min |Σ s_n/b_n − τ|`. `tau` is a decimal or `p/q` string; null means 0.
///
/// # Safety
/// `seq` must be a live handle, `tau` null or NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sh_min_signed_sum(
    seq: *const ShSequence,
    tau: *const c_char,
    out: *mut *mut ShSearchResult,
) -> ShStatus {
    guard(|| {
        let s = get(seq, "seq")?;
        let tau = parse_tau(tau)?;
        let r = min_signed_sum(&s.0, &tau)?;
        put(out, "out", boxed(ShSearchResult(r)))
    })
}

/// `value · scale` as a decimal string; free with [`sh_string_free`].
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sh_search_result_scaled_num(res: *const ShSearchResult) -> *mut c_char {
    res.as_ref().map_or(ptr::null_mut(), |r| c_string(r.0.scaled_num.to_string()))
}

/// The common denominator as a decimal string; free with [`sh_string_free`].
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sh_search_result_scale(res: *const ShSearchResult) -> *mut c_char {
    res.as_ref().map_or(ptr::null_mut(), |r| c_string(r.0.scale.to_string()))
}

/// Optimal signs as `+`/`-`, first term first; free with [`sh_string_free`].
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sh_search_result_witness(res: *const ShSearchResult) -> *mut c_char {
    res.as_ref().map_or(ptr::null_mut(), |r| c_string(r.0.witness.to_string()))
}

/// The minimum as a double (NaN for a null handle).
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sh_search_result_value(res: *const ShSearchResult) -> f64 {
    res.as_ref().map_or(f64::NAN, |r| r.0.value.to_f64())
}

/// # Safety
/// `res` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn sh_search_result_free(res: *mut ShSearchResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// Exact smallest non-zero `|Σ ε_n/b_n|` over `ε_n ∈ {−1, 0, 1}`.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sh_min_gap(seq: *const ShSequence, out: *mut *mut ShGapResult) -> ShStatus {
    guard(|| {
        let s = get(seq, "seq")?;
        let g = min_gap(&s.0)?;
        put(out, "out", boxed(ShGapResult(g)))
    })
}

/// `gap · scale` as a decimal string; free with [`sh_string_free`].
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sh_gap_result_scaled_num(res: *const ShGapResult) -> *mut c_char {
    res.as_ref().map_or(ptr::null_mut(), |r| c_string(r.0.scaled_num.to_string()))
}

/// The common denominator as a decimal string; free with [`sh_string_free`].
///
/// # Safety
/// `res` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sh_gap_result_scale(res: *const ShGapResult) -> *mut c_char {
    res.as_ref().map_or(ptr::null_mut(), |r| c_string(r.0.scale.to_string()))
}

/// Copies up to `cap` witness entries (each −1, 0 or 1) and returns the count.
///
/// # Safety
/// `res` must be a live handle and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn sh_gap_result_witness(res: *const ShGapResult, buf: *mut i8, cap: size_t) -> size_t {
    let (Some(r), false) = (res.as_ref(), buf.is_null()) else {
        return 0;
    };
    let n = cap.min(r.0.witness.len());
    ptr::copy_nonoverlapping(r.0.witness.as_ptr(), buf, n);
    n
}

/// # Safety
/// `res` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn sh_gap_result_free(res: *mut ShGapResult) {
    if !res.is_null() {
        drop(Box::from_raw(res));
    }
}

/// `ρ_N(x) = Π cos(πx/b_n)` over the terms of `seq`.
///
/// # Safety
/// `seq` must be a live handle and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn sh_rho_n(seq: *const ShSequence, x: f64, value: *mut f64) -> ShStatus {
    guard(|| {
        let s = get(seq, "seq")?;
        put(value, "value", rho_n(&s.0, x).value)
    })
}

/// The infinite product `ρ(x)` for the family of `seq`, within `eps`.
///
/// # Safety
/// `seq` must be a live handle; `value` and `bound` writable.
#[no_mangle]
pub unsafe extern "C" fn sh_rho_limit(
    seq: *const ShSequence,
    x: f64,
    eps: f64,
    value: *mut f64,
    bound: *mut f64,
) -> ShStatus {
    guard(|| {
        let s = get(seq, "seq")?;
        let r = rho_limit(&s.0.spec, x, eps)?;
        put(value, "value", r.value)?;
        put(bound, "bound", r.tail_bound)
    })
}

/// A density evaluator for the family of `seq` at tolerance `eps`.
///
/// # Safety
/// `seq` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sh_density_new(seq: *const ShSequence, eps: f64, out: *mut *mut ShDensity) -> ShStatus {
    guard(|| {
        let s = get(seq, "seq")?;
        let ev = DensityEvaluator::new(&s.0.spec, eps)?;
        put(out, "out", boxed(ShDensity(ev)))
    })
}

/// `g(x)` and its quadrature error estimate.
///
/// # Safety
/// `d` must be a live handle; `g` writable; `error` null or writable.
#[no_mangle]
pub unsafe extern "C" fn sh_density_eval(d: *const ShDensity, x: f64, g: *mut f64, error: *mut f64) -> ShStatus {
    guard(|| {
        let d = get(d, "density")?;
        let s = d.0.density(x);
        put(g, "g", s.g)?;
        if !error.is_null() {
            error.write(s.quadrature_error_estimate);
        }
        Ok(())
    })
}

/// `∫_lo^hi g`.
///
/// # Safety
/// `d` must be a live handle and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn sh_density_interval(d: *const ShDensity, lo: f64, hi: f64, value: *mut f64) -> ShStatus {
    guard(|| {
        let d = get(d, "density")?;
        let p = d.0.interval_probability(lo, hi)?;
        put(value, "value", p.value)
    })
}

/// # Safety
/// `d` must be null or a handle from this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn sh_density_free(d: *mut ShDensity) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Samples `X_N` over the terms of `seq` and compares `P[X_N ∈ [lo, hi)]`
/// with `∫ g` from `d`.
///
/// # Safety
/// `seq` and `d` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sh_simulate(
    seq: *const ShSequence,
    d: *const ShDensity,
    samples: u64,
    seed: u64,
    lo: f64,
    hi: f64,
    out: *mut ShSimulationReport,
) -> ShStatus {
    guard(|| {
        let s = get(seq, "seq")?;
        let d = get(d, "density")?;
        let config = SimulationConfig {
            spec: s.0.spec.clone(),
            n: s.0.len(),
            samples,
            seed,
            interval: (lo, hi),
        };
        let r = simulate_with(&config, &d.0)?;
        put(
            out,
            "out",
            ShSimulationReport {
                empirical_prob: r.empirical_prob,
                predicted: r.predicted,
                standard_error: r.standard_error,
                z_score: r.z_score,
                sample_mean: r.sample_mean,
                sample_variance: r.sample_variance,
            },
        )
    })
}
