//! The limiting density `g(x) = 2 ∫_0^∞ cos(2πux) ρ(2u) du`.

use serde::Serialize;
use std::f64::consts::PI;

use super::quadrature::{adaptive_simpson, panel_integral, Integral};
use super::rho::{LimitKernel, RHO_TERM_CAP};
use crate::error::{Error, Result};
use crate::sequences::SequenceSpec;

/// Terms in the pilot product used to pick `U` and `M`.
const PILOT_TERMS: usize = 1 << 16;
/// Largest cutoff `U` tried before giving up.
const U_CAP: f64 = 256.0;
/// Envelope samples per unit length of `u`.
const ENVELOPE_DENSITY: f64 = 64.0;

/// Where the integral for `g` was cut off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncation {
    /// Factors in the product `ρ_M`.
    pub m: usize,
    /// Upper limit of the `u` integral.
    pub u: f64,
    /// `b_M`.
    pub last_term: u64,
}

/// One evaluation of `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensitySample {
    pub x: f64,
    pub g: f64,
    pub quadrature_error_estimate: f64,
    pub truncation: Truncation,
    /// Bound on the error from replacing `ρ` by `ρ_M` on `[0, U]`.
    pub product_error_bound: f64,
}

/// `∫_I g` with the error estimate of its quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalProbability {
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
    pub quadrature_error_estimate: f64,
    pub product_error_bound: f64,
}

/// Reusable state for evaluating `g` at many points.
///
/// Construction fixes the truncation: `U` is doubled from 1 until sampled
/// `|ρ_{M0}(2u)|` stays below `eps` on `[U, 2U]`, and `M` is taken large
/// enough that `2∫_0^U |ρ − ρ_M|(2u) du ≤ eps/4`. Since every extra factor has
/// modulus at most one, the pilot product `ρ_{M0}` dominates `ρ_M` for
/// `M ≥ M0`, which makes the second condition checkable up front.
#[derive(Debug, Clone)]
pub struct DensityEvaluator {
    kernel: LimitKernel,
    eps: f64,
    u: f64,
    product_error_bound: f64,
}

impl DensityEvaluator {
    pub fn new(spec: &SequenceSpec, eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidInput("eps must be positive".into()));
        }
        spec.validate()?;
        let pilot = LimitKernel::build(spec, 2.0 * U_CAP, u64::MAX, PILOT_TERMS)?;

        let mut u = 1.0;
        while envelope(&pilot, u) >= eps {
            u *= 2.0;
            if u > U_CAP {
                return Err(Error::TruncationFailure(format!(
                    "|ρ(2u)| does not fall below {eps:e} for u ≤ {U_CAP}"
                )));
            }
        }

        // ∫_0^U |ρ_{M0}(2u)| (2πu)² du
        let weight = |t: f64| pilot.eval(2.0 * t).abs() * (2.0 * PI * t).powi(2);
        let moment = panel_integral(&weight, 0.0, u, 0.25, 1e-3 * eps).value;

        let finite = matches!(spec, SequenceSpec::Custom(_));
        let kernel = if finite {
            LimitKernel::build(spec, 2.0 * u, u64::MAX, usize::MAX)?
        } else {
            let need = (4.0 * moment / eps).ceil().min(u64::MAX as f64) as u64;
            let k = LimitKernel::build(spec, 2.0 * u, need.max(pilot.last_term()), RHO_TERM_CAP)?;
            if k.last_term() < need {
                return Err(Error::DivergedTruncation(format!(
                    "eps {eps:e} needs b_M ≥ {need}, reached {} after {} factors",
                    k.last_term(),
                    k.terms()
                )));
            }
            k
        };
        let product_error_bound = if finite {
            0.0
        } else {
            moment / kernel.last_term() as f64
        };
        Ok(Self {
            kernel,
            eps,
            u,
            product_error_bound,
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn truncation(&self) -> Truncation {
        Truncation {
            m: self.kernel.terms(),
            u: self.u,
            last_term: self.kernel.last_term(),
        }
    }

    /// `ρ_M(x)` from the kernel.
    pub fn rho(&self, x: f64) -> f64 {
        self.kernel.eval(x)
    }

    /// `g(x)`; `g(−x)` returns the identical value.
    pub fn density(&self, x: f64) -> DensitySample {
        let ax = x.abs();
        let integrand = |t: f64| 2.0 * (2.0 * PI * t * ax).cos() * self.kernel.eval(2.0 * t);
        let r = panel_integral(&integrand, 0.0, self.u, panel_width(ax), self.eps / 4.0);
        DensitySample {
            x,
            g: r.value,
            quadrature_error_estimate: r.error,
            truncation: self.truncation(),
            product_error_bound: self.product_error_bound,
        }
    }

    /// `∫_lo^hi g`, integrating `g` in closed form in `x` first:
    /// `2 ∫_0^U ρ(2u) (sin 2πu·hi − sin 2πu·lo) / (2πu) du`.
    pub fn interval_probability(&self, lo: f64, hi: f64) -> Result<IntervalProbability> {
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInput(format!("bad interval ({lo}, {hi})")));
        }
        let r = if lo == hi {
            Integral::default()
        } else {
            let integrand = |t: f64| {
                let w = if t == 0.0 {
                    hi - lo
                } else {
                    ((2.0 * PI * t * hi).sin() - (2.0 * PI * t * lo).sin()) / (2.0 * PI * t)
                };
                2.0 * w * self.kernel.eval(2.0 * t)
            };
            let reach = lo.abs().max(hi.abs());
            panel_integral(&integrand, 0.0, self.u, panel_width(reach), self.eps / 4.0)
        };
        Ok(IntervalProbability {
            lo,
            hi,
            value: r.value,
            quadrature_error_estimate: r.error,
            product_error_bound: self.product_error_bound * (hi - lo),
        })
    }
}

/// Half a period of `cos(2πux)` in `u`, capped at 1/4.
fn panel_width(x: f64) -> f64 {
    if x > 1.0 {
        0.5 / x
    } else {
        0.25
    }
}

/// Largest sampled `|ρ(2u)|` over `[u, 2u]`.
fn envelope(kernel: &LimitKernel, u: f64) -> f64 {
    let steps = (u * ENVELOPE_DENSITY).ceil() as usize;
    (0..=steps)
        .map(|i| kernel.eval(2.0 * (u + u * i as f64 / steps as f64)).abs())
        .fold(0.0, f64::max)
}

/// `g(x)` to about `eps`.
pub fn density(spec: &SequenceSpec, x: f64, eps: f64) -> Result<DensitySample> {
    Ok(DensityEvaluator::new(spec, eps)?.density(x))
}

/// `∫_lo^hi g` to about `eps`.
pub fn interval_probability_density(spec: &SequenceSpec, interval: (f64, f64), eps: f64) -> Result<f64> {
    Ok(DensityEvaluator::new(spec, eps)?
        .interval_probability(interval.0, interval.1)?
        .value)
}

/// `∫_a^b g` by adaptive Simpson over density samples, for cross-checking
/// the closed-form route.
pub fn interval_probability_by_samples(ev: &DensityEvaluator, lo: f64, hi: f64, tol: f64) -> Integral {
    adaptive_simpson(&|x: f64| ev.density(x).g, lo, hi, tol)
}
