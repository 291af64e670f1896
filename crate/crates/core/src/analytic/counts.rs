//! Counting functions behind the decay estimates for `ρ_N`.

use crate::sequences::SequenceTerms;

/// Distance from `t` to the nearest integer.
pub fn dist_to_int(t: f64) -> f64 {
    (t - t.round()).abs()
}

/// `#{n ≤ N : ‖x / b_n‖ ≥ δ}`.
pub fn s_count(terms: &SequenceTerms, delta: f64, x: f64) -> usize {
    terms
        .terms
        .iter()
        .filter(|&&b| dist_to_int(x / b as f64) >= delta)
        .count()
}

/// Indices `n` (1-based) with `N/2 ≤ n ≤ N`.
fn upper_half(terms: &SequenceTerms) -> &[u64] {
    let n = terms.len();
    let first = n.div_ceil(2).max(1);
    &terms.terms[first - 1..]
}

/// Integers strictly inside `(x − y, x + y)` as an inclusive range.
fn open_interval(x: f64, y: f64) -> Option<(i128, i128)> {
    if y <= 0.0 {
        return None;
    }
    let lo = (x - y).floor() as i128 + 1;
    let hi = (x + y).ceil() as i128 - 1;
    (lo <= hi).then_some((lo, hi))
}

/// `D(N, y, x) = Σ_{x−y < m < x+y} #{n ∈ [N/2, N] : b_n | m}`.
///
/// Counts multiples of each `b_n` in the interval directly, so the cost does
/// not depend on `y`.
pub fn d_count(terms: &SequenceTerms, y: f64, x: f64) -> u64 {
    let Some((lo, hi)) = open_interval(x, y) else {
        return 0;
    };
    upper_half(terms)
        .iter()
        .map(|&b| {
            let b = b as i128;
            (hi.div_euclid(b) - (lo - 1).div_euclid(b)) as u64
        })
        .sum()
}

/// `σ_{−w}(m) = Σ_{d | m} d^{−w}`.
pub fn sigma_minus(w: f64, m: u64) -> f64 {
    assert!(m >= 1, "m must be positive");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            small.push(d);
            if d != m / d {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small
        .into_iter()
        .chain(large.into_iter().rev())
        .map(|d| (d as f64).powf(-w))
        .sum()
}
