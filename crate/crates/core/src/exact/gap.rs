//! Minimal gap `Δ_N` between distinct signed sums.
//!
//! Two sign vectors `s ≠ s'` differ by `Σ (s_n − s'_n)/b_n = 2 Σ ε_n/b_n` with
//! `ε_n ∈ {−1, 0, +1}`, so half the smallest distance between distinct sums is
//! the smallest non-zero `|Σ ε_n/b_n|`. That half-distance is what is reported.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::search::{lcm_of, signed_sums, weights, SearchLimits};
use super::value::ExactValue;
use super::wide::with_scalar;
use crate::error::{Error, Result};
use crate::sequences::SequenceTerms;

/// `Δ_N` with a trit vector `ε` such that `Σ ε_n/b_n = +Δ_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapResult {
    pub gap: ExactValue,
    /// `gap · scale`.
    pub scaled_num: BigInt,
    /// `lcm(b_1, …, b_N)`.
    pub scale: BigInt,
    pub witness: Vec<i8>,
}

pub fn min_gap(terms: &SequenceTerms) -> Result<GapResult> {
    min_gap_with(terms, &SearchLimits::default())
}

/// Sorts all `2^N` scaled sums and scans adjacent distinct pairs.
pub fn min_gap_with(terms: &SequenceTerms, limits: &SearchLimits) -> Result<GapResult> {
    let n = terms.len();
    limits.check_terms("terms in gap search", n, limits.gap_max_terms)?;
    let scale = lcm_of(&terms.terms);
    let w = weights(&terms.terms, &scale);
    let bits = w.iter().sum::<BigInt>().bits() + 2;

    let (diff, lo_mask, hi_mask) = with_scalar!(bits, S => {
        let per = std::mem::size_of::<(S, u64)>() as u64 + if S::SAFE_BITS == u64::MAX { 8 * bits.div_ceil(64) } else { 0 };
        limits.check_memory(per << n)?;
        let ws: Vec<S> = w.iter().map(S::from_big).collect();
        let mut all: Vec<(S, u64)> = signed_sums::<S>(&ws)
            .into_iter()
            .enumerate()
            .map(|(m, s)| (s, m as u64))
            .collect();
        all.par_sort_unstable();
        let zero = S::zeroed();
        let mut best: Option<(S, u64, u64)> = None;
        for pair in all.windows(2) {
            let d = pair[1].0.sub(&pair[0].0);
            if d == zero {
                continue;
            }
            if best.as_ref().is_none_or(|b| d < b.0) {
                best = Some((d, pair[0].1, pair[1].1));
            }
        }
        let (d, lo, hi) = best.ok_or_else(|| Error::InvalidInput("all signed sums coincide".into()))?;
        (d.to_big(), lo, hi)
    });

    let scaled_num: BigInt = diff / 2;
    debug_assert!(!scaled_num.is_zero());
    let witness = (0..n)
        .map(|i| (hi_mask >> i & 1) as i8 - (lo_mask >> i & 1) as i8)
        .collect();
    Ok(GapResult {
        gap: ExactValue::new(scaled_num.clone(), scale.clone())?,
        scaled_num,
        scale,
        witness,
    })
}
