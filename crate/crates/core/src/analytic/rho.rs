//! The cosine product `ρ_N(x) = Π_{n ≤ N} cos(πx / b_n)` and its limit.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sequences::{SequenceSpec, SequenceTerms};

/// Largest number of factors `rho_limit` will multiply.
pub const RHO_TERM_CAP: usize = 100_000_000;

/// Largest `πx/b` handled by the power-series tail of [`LimitKernel`].
const SERIES_MAX_ARG: f64 = 0.25;

/// Number of even powers kept in the `log cos` series.
const SERIES_TERMS: usize = 8;

/// `cos(πt)`, exactly zero at half-integers and exactly ±1 at integers.
pub fn cos_pi(t: f64) -> f64 {
    let r = (t - 2.0 * (t / 2.0).round()).abs();
    if r <= 0.25 {
        (PI * r).cos()
    } else if r <= 0.75 {
        (PI * (0.5 - r)).sin()
    } else {
        -(PI * (1.0 - r)).cos()
    }
}

/// A value of `ρ_N(x)` or of its limit `ρ(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoValue {
    pub x: f64,
    /// `Some(N)` for a finite product, `None` for the limit.
    pub n: Option<usize>,
    /// Factors actually multiplied.
    pub terms_used: usize,
    pub value: f64,
    /// Certified `|value − ρ(x)|` for the limit; zero for finite products.
    pub tail_bound: f64,
}

/// `ρ_N(x)`, multiplied in order `n = 1..N`.
pub fn rho_n(terms: &SequenceTerms, x: f64) -> RhoValue {
    let value = terms.terms.iter().fold(1.0, |acc, &b| acc * cos_pi(x / b as f64));
    RhoValue {
        x,
        n: Some(terms.len()),
        terms_used: terms.len(),
        value,
        tail_bound: 0.0,
    }
}

/// Bound on `|ρ(x) − ρ_M(x)|` given `ρ_M(x)` and `b_M`.
///
/// `|1 − Π_{n>M} cos t_n| ≤ Σ_{n>M} t_n²/2` and, for strictly increasing
/// integers, `Σ_{n>M} b_n^{−2} ≤ Σ_{j≥1} (b_M + j)^{−2} ≤ 1/b_M`.
pub fn tail_bound(rho_m: f64, x: f64, b_m: u64) -> f64 {
    let px = PI * x;
    rho_m.abs() * px * px / (2.0 * b_m as f64)
}

/// `ρ(x)` to within `eps`, multiplying factors until the certified tail
/// bound drops below `eps`.
pub fn rho_limit(spec: &SequenceSpec, x: f64, eps: f64) -> Result<RhoValue> {
    rho_limit_capped(spec, x, eps, RHO_TERM_CAP)
}

pub fn rho_limit_capped(spec: &SequenceSpec, x: f64, eps: f64, cap: usize) -> Result<RhoValue> {
    if !(eps > 0.0) {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    if !x.is_finite() {
        return Err(Error::InvalidInput("x must be finite".into()));
    }
    let done = |m, value, tail| RhoValue {
        x,
        n: None,
        terms_used: m,
        value,
        tail_bound: tail,
    };
    if x == 0.0 {
        return Ok(done(0, 1.0, 0.0));
    }
    let finite = matches!(spec, SequenceSpec::Custom(_));
    let mut product = 1.0;
    let mut checkpoint = 1024.min(cap.max(1));
    let mut m = 0;
    let mut last = 0;
    for b in spec.terms()? {
        product *= cos_pi(x / b as f64);
        m += 1;
        last = b;
        if product == 0.0 {
            return Ok(done(m, 0.0, 0.0));
        }
        if m == checkpoint {
            let bound = tail_bound(product, x, b);
            if bound <= eps {
                return Ok(done(m, product, bound));
            }
            if m >= cap {
                return Err(Error::DivergedTruncation(format!(
                    "tail bound {bound:e} at x = {x} still above {eps:e} after {m} factors"
                )));
            }
            checkpoint = (checkpoint * 2).min(cap);
        }
    }
    if finite {
        return Ok(done(m, product, 0.0));
    }
    Err(Error::Overflow(format!("sequence ended after {m} terms at {last}")))
}

/// Coefficients of `−log cos t = Σ_j c_j t^{2j}`.
fn log_cos_coefficients() -> [f64; SERIES_TERMS + 1] {
    // |B_2|, |B_4|, …, |B_18|
    const BERNOULLI: [f64; SERIES_TERMS + 1] = [
        1.0 / 6.0,
        1.0 / 30.0,
        1.0 / 42.0,
        1.0 / 30.0,
        5.0 / 66.0,
        691.0 / 2730.0,
        7.0 / 6.0,
        3617.0 / 510.0,
        43867.0 / 798.0,
    ];
    let mut c = [0.0; SERIES_TERMS + 1];
    let mut factorial = 1.0;
    for (i, b) in BERNOULLI.iter().enumerate() {
        let j = (i + 1) as i32;
        factorial *= (2 * j - 1) as f64 * (2 * j) as f64;
        let four_j = 4f64.powi(j);
        c[i] = four_j / 2.0 * (four_j - 1.0) * b / (j as f64 * factorial);
    }
    c
}

/// Neumaier-compensated running sum.
#[derive(Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }
    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `ρ_M(x)` for many `x` at the cost of a few dozen cosines each.
///
/// Factors with `πx/b_n > 1/4` are multiplied explicitly; the rest enter
/// through `exp(−Σ_j c_j (πx)^{2j} S_{2j})` with precomputed power sums
/// `S_{2j} = Σ b_n^{−2j}`.
#[derive(Debug, Clone)]
pub struct LimitKernel {
    head: Vec<f64>,
    /// `suffix[i][j] = Σ_{n ≥ i} b_n^{−2(j+1)}` over the stored tail of the product.
    suffix: Vec<[f64; SERIES_TERMS + 1]>,
    coeffs: [f64; SERIES_TERMS + 1],
    m: usize,
    b_m: u64,
    x_cap: f64,
}

impl LimitKernel {
    /// Builds `ρ_M` where `M` is the first index with `b_M ≥ min_last_term`,
    /// or `max_terms`, whichever comes first.
    pub fn build(spec: &SequenceSpec, x_cap: f64, min_last_term: u64, max_terms: usize) -> Result<Self> {
        Self::from_terms(spec.terms()?, x_cap, min_last_term, max_terms)
    }

    /// As [`LimitKernel::build`], over an explicit increasing stream of terms.
    pub fn from_terms(
        terms: impl Iterator<Item = u64>,
        x_cap: f64,
        min_last_term: u64,
        max_terms: usize,
    ) -> Result<Self> {
        let coeffs = log_cos_coefficients();
        let head_limit = PI * x_cap / SERIES_MAX_ARG;
        let mut head = Vec::new();
        let mut tail = [CompensatedSum::default(); SERIES_TERMS + 1];
        let mut m = 0;
        let mut b_m = 0;
        for b in terms {
            m += 1;
            b_m = b;
            let bf = b as f64;
            if bf <= head_limit {
                head.push(bf);
            } else {
                let inv2 = 1.0 / (bf * bf);
                let mut p = inv2;
                for s in tail.iter_mut() {
                    s.add(p);
                    p *= inv2;
                }
            }
            if m >= max_terms || b >= min_last_term {
                break;
            }
        }
        if m == 0 {
            return Err(Error::InvalidSpec("empty sequence".into()));
        }
        let mut suffix = vec![[0.0; SERIES_TERMS + 1]; head.len() + 1];
        let mut acc = tail;
        suffix[head.len()] = acc.map(|s| s.value());
        for (i, &b) in head.iter().enumerate().rev() {
            let inv2 = 1.0 / (b * b);
            let mut p = inv2;
            for s in acc.iter_mut() {
                s.add(p);
                p *= inv2;
            }
            suffix[i] = acc.map(|s| s.value());
        }
        Ok(Self {
            head,
            suffix,
            coeffs,
            m,
            b_m,
            x_cap,
        })
    }

    /// Number of factors `M`.
    pub fn terms(&self) -> usize {
        self.m
    }

    pub fn last_term(&self) -> u64 {
        self.b_m
    }

    pub fn x_cap(&self) -> f64 {
        self.x_cap
    }

    /// `ρ_M(x)`; accurate to a few ulps in relative terms for `|x| ≤ x_cap`.
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.abs();
        let cut = PI * x / SERIES_MAX_ARG;
        let split = self.head.partition_point(|&b| b <= cut);
        let mut product = 1.0;
        for &b in &self.head[..split] {
            product *= cos_pi(x / b);
            if product == 0.0 {
                return 0.0;
            }
        }
        let px2 = (PI * x) * (PI * x);
        let sums = &self.suffix[split];
        let mut power = px2;
        let mut log_tail = 0.0;
        for j in 0..SERIES_TERMS {
            log_tail += self.coeffs[j] * power * sums[j];
            power *= px2;
        }
        product * (-log_tail).exp()
    }

    /// Bound on `|ρ(x) − ρ_M(x)|`.
    pub fn tail_bound(&self, x: f64, rho_m: f64) -> f64 {
        tail_bound(rho_m, x, self.b_m)
    }
}
