//! Finite-range checks of the inequalities that control `ρ_N`.
//!
//! Each check evaluates both sides numerically and reports what it saw; none
//! of them proves anything beyond the sampled points.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{E, PI};

use super::counts::{d_count, s_count};
use super::quadrature::panel_integral;
use super::rho::{rho_n, LimitKernel};
use crate::error::{Error, Result};
use crate::exact::{enumerate_sums_with, ExactValue, SearchLimits};
use crate::sequences::{generate, SequenceSpec, SequenceTerms};

/// Absolute slack for the exponential bound.
pub const EXP_BOUND_SLACK: f64 = 1e-9;

/// Placeholder for the constant in the divisor-sum bound that sets the top of
/// the decay range.
pub const C1_PLACEHOLDER: f64 = 1.518;

/// `C′ = (1 / (2 C₁ e))²` with the placeholder `C₁`.
pub fn default_c_prime() -> f64 {
    (1.0 / (2.0 * C1_PLACEHOLDER * E)).powi(2)
}

/// `|ρ_N(x)| ≤ exp(−π²δ²/2 · #S(N, δ, x)) + slack`.
pub fn check_exponential_bound(terms: &SequenceTerms, delta: f64, x: f64) -> bool {
    let lhs = rho_n(terms, x).value.abs();
    let s = s_count(terms, delta, x) as f64;
    lhs <= (-PI * PI * delta * delta / 2.0 * s).exp() + EXP_BOUND_SLACK
}

/// Both sides of the relaxed sandwich
/// `N/2 − D(N, y(δ), x) − 1 ≤ #S(N, δ, x) ≤ N` with `y(δ) = δ · b_N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichSample {
    pub x: f64,
    pub delta: f64,
    pub y: f64,
    pub s: usize,
    pub d: u64,
    pub holds: bool,
}

pub fn check_sandwich(terms: &SequenceTerms, delta: f64, x: f64) -> SandwichSample {
    let n = terms.len();
    let y = delta * *terms.terms.last().expect("non-empty terms") as f64;
    let s = s_count(terms, delta, x);
    let d = d_count(terms, y, x);
    let lower = n as f64 / 2.0 - d as f64 - 1.0;
    SandwichSample {
        x,
        delta,
        y,
        s,
        d,
        holds: s as f64 >= lower && s <= n,
    }
}

/// Settings for [`check_decay`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayOptions {
    /// Left end of the range; `N` when unset.
    pub x_lo: Option<f64>,
    /// Hard cap on the right end.
    pub x_cap: f64,
    /// `C′` in `exp(C′ log² N)`; the placeholder when unset.
    pub c_prime: Option<f64>,
}

impl Default for DecayOptions {
    fn default() -> Self {
        Self {
            x_lo: None,
            x_cap: 1e6,
            c_prime: None,
        }
    }
}

/// Outcome of a sampled polynomial-decay check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheckReport {
    #[serde(rename = "A")]
    pub a: f64,
    pub n: usize,
    pub range: (f64, f64),
    pub samples: usize,
    /// Points with `|ρ_N(x)| > x^{−A}`.
    pub violations: Vec<f64>,
    pub passed: bool,
    pub c_prime: f64,
    /// `C′` is the built-in placeholder rather than a supplied value.
    pub c_prime_placeholder: bool,
    /// `exp(C′ log² N)`, before capping.
    pub theoretical_end: f64,
    /// The capped right end fell below the left end, so only `x_lo` was sampled.
    pub degenerate: bool,
}

/// Samples `|ρ_N|` on a log-spaced grid over `[x_lo, min(cap, exp(C′ log² N))]`.
pub fn check_decay(spec: &SequenceSpec, n: usize, a: f64, grid: usize, opts: &DecayOptions) -> Result<BoundCheckReport> {
    if !(a >= 0.0) {
        return Err(Error::InvalidInput("A must be non-negative".into()));
    }
    if grid == 0 {
        return Err(Error::InvalidInput("grid must have at least one point".into()));
    }
    let terms = generate(spec, n)?;
    let lo = opts.x_lo.unwrap_or(n as f64);
    if !(lo > 0.0) {
        return Err(Error::InvalidInput("x_lo must be positive".into()));
    }
    let c_prime = opts.c_prime.unwrap_or_else(default_c_prime);
    let ln_n = (n as f64).ln();
    let theoretical_end = (c_prime * ln_n * ln_n).exp();
    let hi = opts.x_cap.min(theoretical_end);
    let degenerate = hi < lo;
    let hi = hi.max(lo);
    let points = if degenerate { 1 } else { grid };

    let xs: Vec<f64> = (0..points)
        .map(|i| {
            if points == 1 {
                lo
            } else {
                lo * (hi / lo).powf(i as f64 / (points - 1) as f64)
            }
        })
        .collect();
    let violations: Vec<f64> = xs
        .par_iter()
        .filter(|&&x| rho_n(&terms, x).value.abs() > x.powf(-a))
        .copied()
        .collect();
    Ok(BoundCheckReport {
        a,
        n,
        range: (lo, hi),
        samples: points,
        passed: violations.is_empty(),
        violations,
        c_prime,
        c_prime_placeholder: opts.c_prime.is_none(),
        theoretical_end,
        degenerate,
    })
}

/// One grid point of the comparison between `ρ_N` and `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioPoint {
    pub x: f64,
    /// `|ρ_N(x)/ρ(x) − 1|`; zero where both vanish.
    pub deviation: f64,
    /// Bound on the error in `deviation` from truncating `ρ`.
    pub truncation: f64,
    /// `K x² / N`.
    pub allowed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitRatioReport {
    pub n: usize,
    pub k: f64,
    pub points: Vec<RatioPoint>,
    pub passed: bool,
}

/// `|ρ_N(x)/ρ(x) − 1| ≤ K x²/N` on `grid` equally spaced points of `[0, √N]`.
///
/// The ratio is `1/Π_{n>N} cos(πx/b_n) − 1`, which avoids dividing two
/// products that share their first `N` factors.
pub fn check_limit_ratio(spec: &SequenceSpec, n: usize, k: f64, grid: usize) -> Result<LimitRatioReport> {
    if n == 0 || grid < 2 {
        return Err(Error::InvalidInput("need N ≥ 1 and at least two grid points".into()));
    }
    let x_max = (n as f64).sqrt();
    let tail = LimitKernel::from_terms(spec.terms()?.skip(n), x_max, 1000 * n as u64, 100_000_000)?;
    let terms = generate(spec, n)?;
    let points: Vec<RatioPoint> = (0..grid)
        .into_par_iter()
        .map(|i| {
            let x = x_max * i as f64 / (grid - 1) as f64;
            let r = tail.eval(x);
            let rn = rho_n(&terms, x).value;
            let allowed = k * x * x / n as f64;
            if rn == 0.0 || r == 0.0 {
                return RatioPoint { x, deviation: 0.0, truncation: 0.0, allowed };
            }
            // relative error of the truncated tail, carried through 1/r
            let rel = (PI * x).powi(2) / (2.0 * tail.last_term() as f64);
            RatioPoint {
                x,
                deviation: (1.0 / r - 1.0).abs(),
                truncation: rel / r,
                allowed,
            }
        })
        .collect();
    let passed = points.iter().all(|p| p.deviation + p.truncation <= p.allowed + 1e-12);
    Ok(LimitRatioReport { n, k, points, passed })
}

/// `Φ(y) = cos⁴(πy/2)` on `[−1, 1]`, zero outside.
pub fn bump(y: f64) -> f64 {
    if y.abs() >= 1.0 {
        0.0
    } else {
        (PI * y / 2.0).cos().powi(4)
    }
}

/// `Φ̂(ξ) = ∫ Φ(y) e^{−2πiξy} dy`, from `cos⁴θ = 3/8 + cos 2θ/2 + cos 4θ/8`.
pub fn bump_transform(xi: f64) -> f64 {
    let sinc = |c: f64| if c == 0.0 { 1.0 } else { c.sin() / c };
    let w = 2.0 * PI * xi;
    0.75 * sinc(w)
        + 0.5 * (sinc(PI - w) + sinc(PI + w))
        + 0.125 * (sinc(2.0 * PI - w) + sinc(2.0 * PI + w))
}

/// Both sides of `E[Φ(X_N)] = ∫ Φ̂(ξ) ρ_N(2ξ) dξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectationIdentity {
    pub n: usize,
    /// Average of `Φ` over all `2^N` sign vectors.
    pub exhaustive: f64,
    /// The transform side by quadrature.
    pub fourier: f64,
    pub quadrature_error_estimate: f64,
    pub difference: f64,
}

/// Cutoff of the `ξ` integral; `|Φ̂(ξ)| = O(ξ^{−5})` makes the rest negligible.
const XI_CUT: f64 = 400.0;

pub fn expectation_identity(terms: &SequenceTerms) -> Result<ExpectationIdentity> {
    let table = enumerate_sums_with(terms, &SearchLimits::default())?;
    let mut total = 0.0;
    for (s, _) in &table.entries {
        total += bump(ExactValue::new(s.clone(), table.scale.clone())?.to_f64());
    }
    let exhaustive = total / table.entries.len() as f64;
    let integrand = |xi: f64| 2.0 * bump_transform(xi) * rho_n(terms, 2.0 * xi).value;
    let r = panel_integral(&integrand, 0.0, XI_CUT, 0.05, 1e-10);
    Ok(ExpectationIdentity {
        n: terms.len(),
        exhaustive,
        fourier: r.value,
        quadrature_error_estimate: r.error,
        difference: (exhaustive - r.value).abs(),
    })
}
