//! Meet-in-the-middle search for `m_N(τ) = min |Σ s_n/b_n − τ|`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sign::{SignVector, MAX_SIGNS};
use super::value::ExactValue;
use super::wide::{with_scalar, Scalar};
use crate::error::{Error, Result};
use crate::sequences::SequenceTerms;

const CHUNK: usize = 1 << 12;

/// Size and memory caps shared by the exact searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub max_terms: usize,
    pub gap_max_terms: usize,
    pub enumerate_max_terms: usize,
    pub memory_budget: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            max_terms: 48,
            gap_max_terms: 26,
            enumerate_max_terms: 24,
            memory_budget: 8 << 30,
        }
    }
}

impl SearchLimits {
    /// Limits with the term caps lifted to what the sign encoding can hold.
    pub fn forced(memory_budget: u64) -> Self {
        Self {
            max_terms: MAX_SIGNS,
            gap_max_terms: MAX_SIGNS,
            enumerate_max_terms: MAX_SIGNS,
            memory_budget,
        }
    }

    pub(crate) fn check_terms(&self, what: &'static str, n: usize, cap: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidInput("N must be at least 1".into()));
        }
        let cap = cap.min(MAX_SIGNS);
        if n > cap {
            return Err(Error::CapExceeded {
                what,
                requested: n as u64,
                cap: cap as u64,
            });
        }
        Ok(())
    }

    pub(crate) fn check_memory(&self, needed: u64) -> Result<()> {
        if needed > self.memory_budget {
            return Err(Error::OutOfMemory {
                needed,
                budget: self.memory_budget,
            });
        }
        Ok(())
    }
}

/// The minimum of `|Σ s_n/b_n − τ|` with a sign vector attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    /// `|S_N − τ|` at the optimum.
    pub value: ExactValue,
    /// `value · scale`, always a non-negative integer.
    pub scaled_num: BigInt,
    /// `lcm(b_1, …, b_N, den τ)`; equals `p_1⋯p_N` for primes and integer τ.
    pub scale: BigInt,
    pub witness: SignVector,
    pub tau: ExactValue,
}

/// All `2^N` signed sums scaled by `lcm(b_1..b_N)`, sorted by value then encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumTable {
    pub scale: BigInt,
    pub entries: Vec<(BigInt, SignVector)>,
}

pub(crate) fn lcm_of(terms: &[u64]) -> BigInt {
    terms
        .iter()
        .fold(BigInt::one(), |acc, &b| acc.lcm(&BigInt::from(b)))
}

/// Scaled weights `L / b_n`.
pub(crate) fn weights(terms: &[u64], scale: &BigInt) -> Vec<BigInt> {
    terms.iter().map(|&b| scale / BigInt::from(b)).collect()
}

fn bits_needed(weights: &[BigInt], extra: &BigInt) -> u64 {
    let total: BigInt = weights.iter().sum::<BigInt>() + extra.abs();
    total.bits() + 1
}

fn scalar_bytes<S: Scalar>(bits: u64) -> u64 {
    let inline = std::mem::size_of::<S>() as u64;
    if S::SAFE_BITS == u64::MAX {
        inline + 8 * bits.div_ceil(64)
    } else {
        inline
    }
}

/// Signed sums of every sign pattern over `w`, indexed by the pattern's bits.
pub(crate) fn signed_sums<S: Scalar>(w: &[S]) -> Vec<S> {
    let total = w.iter().fold(S::zeroed(), |acc, x| acc.add(x));
    let doubled: Vec<S> = w.iter().map(|x| x.add(x)).collect();
    let size = 1usize << w.len();
    let mut sums = Vec::with_capacity(size);
    sums.push(S::zeroed().sub(&total));
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        let prev = &sums[mask & (mask - 1)];
        let next = prev.add(&doubled[low]);
        sums.push(next);
    }
    sums
}

/// `(|S − T|, bits)` minimising `|S − T|` and then `bits`.
fn meet_in_the_middle<S: Scalar>(weights: &[BigInt], target: &BigInt) -> (BigInt, u64) {
    let h = weights.len().div_ceil(2);
    let w: Vec<S> = weights.iter().map(S::from_big).collect();
    let low = signed_sums(&w[..h]);
    let mut high: Vec<(S, u64)> = signed_sums(&w[h..])
        .into_iter()
        .enumerate()
        .map(|(m, s)| (s, m as u64))
        .collect();
    high.par_sort_unstable();
    // keep the smallest high-half encoding for each distinct value
    high.dedup_by(|later, earlier| later.0 == earlier.0);
    let target = S::from_big(target);

    let best = low
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(ci, chunk)| {
            let mut best: Option<(S, u64, u64)> = None;
            for (j, sa) in chunk.iter().enumerate() {
                let a = (ci * CHUNK + j) as u64;
                let want = target.sub(sa);
                let idx = high.partition_point(|(s, _)| *s < want);
                let lo = idx.checked_sub(1);
                for k in [lo, Some(idx)].into_iter().flatten() {
                    let Some((sb, b)) = high.get(k) else { continue };
                    let cand = (sb.abs_diff(&want), *b, a);
                    if best.as_ref().is_none_or(|cur| cand < *cur) {
                        best = Some(cand);
                    }
                }
            }
            best
        })
        .reduce(|| None, |x, y| match (x, y) {
            (Some(x), Some(y)) => Some(if y < x { y } else { x }),
            (x, None) => x,
            (None, y) => y,
        })
        .expect("at least one sign pattern");
    (best.0.to_big(), best.2 | best.1 << h)
}

/// Exact `m_N(τ)` and the lexicographically smallest optimal sign vector.
pub fn min_signed_sum(terms: &SequenceTerms, tau: &ExactValue) -> Result<SearchResult> {
    min_signed_sum_with(terms, tau, &SearchLimits::default())
}

pub fn min_signed_sum_with(
    terms: &SequenceTerms,
    tau: &ExactValue,
    limits: &SearchLimits,
) -> Result<SearchResult> {
    let n = terms.len();
    limits.check_terms("terms in signed-sum search", n, limits.max_terms)?;
    let scale = lcm_of(&terms.terms).lcm(tau.den());
    let w = weights(&terms.terms, &scale);
    let target = tau.num() * (&scale / tau.den());
    let bits = bits_needed(&w, &target);
    let h = n.div_ceil(2);
    let (scaled_num, bits_out) = with_scalar!(bits, S => {
        let per = scalar_bytes::<S>(bits);
        limits.check_memory((per << h) + ((per + 8) << (n - h)))?;
        meet_in_the_middle::<S>(&w, &target)
    });
    let value = ExactValue::new(scaled_num.clone(), scale.clone())?;
    Ok(SearchResult {
        value,
        scaled_num,
        scale,
        witness: SignVector::new(bits_out, n)?,
        tau: tau.clone(),
    })
}

/// Every signed sum, for oracle use on small `N`.
pub fn enumerate_sums(terms: &SequenceTerms) -> Result<SumTable> {
    enumerate_sums_with(terms, &SearchLimits::default())
}

pub fn enumerate_sums_with(terms: &SequenceTerms, limits: &SearchLimits) -> Result<SumTable> {
    let n = terms.len();
    limits.check_terms("terms in exhaustive enumeration", n, limits.enumerate_max_terms)?;
    let scale = lcm_of(&terms.terms);
    let w = weights(&terms.terms, &scale);
    let bits = bits_needed(&w, &BigInt::default());
    let entries = with_scalar!(bits, S => {
        limits.check_memory((scalar_bytes::<S>(bits) + 8 + 48) << n)?;
        let ws: Vec<S> = w.iter().map(S::from_big).collect();
        let mut all: Vec<(S, u64)> = signed_sums::<S>(&ws)
            .into_iter()
            .enumerate()
            .map(|(m, s)| (s, m as u64))
            .collect();
        all.par_sort_unstable();
        all.into_iter()
            .map(|(s, m)| Ok((s.to_big(), SignVector::new(m, n)?)))
            .collect::<Result<Vec<_>>>()?
    });
    Ok(SumTable { scale, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::sequences::{generate, SequenceSpec};
    use num_rational::BigRational;

    fn primes(n: usize) -> SequenceTerms {
        generate(&SequenceSpec::Primes, n).unwrap()
    }

    /// Plain `2^N` scan with rational arithmetic.
    fn brute_min(terms: &[u64], tau: &BigRational) -> (BigRational, u64) {
        let n = terms.len();
        (0..1u64 << n)
            .map(|m| {
                let s = SignVector::new(m, n).unwrap().evaluate(terms);
                ((s - tau).abs(), m)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn four_primes() {
        let r = min_signed_sum(&primes(4), &ExactValue::zero()).unwrap();
        assert_eq!(r.scaled_num, BigInt::from(23));
        assert_eq!(r.scale, BigInt::from(210));
        assert_eq!(r.witness.to_string(), "-++-");
        let (v, m) = brute_min(&[2, 3, 5, 7], &BigRational::zero());
        assert_eq!(&v, r.value.as_rational());
        assert_eq!(m, r.witness.bits());
    }

    #[test]
    fn single_prime() {
        let r = min_signed_sum(&primes(1), &ExactValue::zero()).unwrap();
        assert_eq!(r.scaled_num, BigInt::from(1));
        assert_eq!(r.value, ExactValue::new(1, 2).unwrap());
        assert_eq!(r.witness.bits(), 0);
    }

    #[test]
    fn ten_primes() {
        let r = min_signed_sum(&primes(10), &ExactValue::zero()).unwrap();
        assert_eq!(r.scaled_num, BigInt::from(4_919_311));
    }

    #[test]
    fn matches_brute_force_with_fractional_targets() {
        let p = primes(9);
        for tau in ["1/3", "-7/5", "0.61", "2"] {
            let tau: ExactValue = tau.parse().unwrap();
            let r = min_signed_sum(&p, &tau).unwrap();
            let (v, m) = brute_min(&p.terms, tau.as_rational());
            assert_eq!(&v, r.value.as_rational(), "tau {tau}");
            assert_eq!(m, r.witness.bits(), "tau {tau}");
            let replay = (r.witness.evaluate(&p.terms) - tau.as_rational()).abs();
            assert_eq!(&replay, r.value.as_rational());
            assert_eq!(
                ExactValue::new(r.scaled_num.clone(), r.scale.clone()).unwrap(),
                r.value
            );
        }
    }

    #[test]
    fn ties_resolve_to_smallest_encoding() {
        // b = 1, 2, 3, 6: many sign patterns reach |S| = 0
        let t = SequenceTerms::from_custom(vec![1, 2, 3, 6]).unwrap();
        let r = min_signed_sum(&t, &ExactValue::zero()).unwrap();
        let (v, m) = brute_min(&t.terms, &BigRational::zero());
        assert!(v.is_zero());
        assert_eq!(r.witness.bits(), m);
    }

    #[test]
    fn caps_and_budget() {
        let p = primes(49);
        assert!(matches!(
            min_signed_sum(&p, &ExactValue::zero()),
            Err(Error::CapExceeded { .. })
        ));
        let tight = SearchLimits { memory_budget: 1024, ..Default::default() };
        assert!(matches!(
            min_signed_sum_with(&primes(20), &ExactValue::zero(), &tight),
            Err(Error::OutOfMemory { .. })
        ));
    }

    #[test]
    fn enumerates_small_tables() {
        let t = enumerate_sums(&primes(1)).unwrap();
        assert_eq!(t.scale, BigInt::from(2));
        assert_eq!(
            t.entries,
            vec![
                (BigInt::from(-1), SignVector::new(0, 1).unwrap()),
                (BigInt::from(1), SignVector::new(1, 1).unwrap())
            ]
        );
        let t = enumerate_sums(&primes(2)).unwrap();
        let vals: Vec<i64> = t.entries.iter().map(|(s, _)| s.try_into().unwrap()).collect();
        assert_eq!(vals, [-5, -1, 1, 5]);

        // ±15 ± 10 ± 6 expanded by hand
        let mut oracle = Vec::new();
        for a in [-15i64, 15] {
            for b in [-10, 10] {
                for c in [-6, 6] {
                    oracle.push(a + b + c);
                }
            }
        }
        oracle.sort();
        let t = enumerate_sums(&primes(3)).unwrap();
        let vals: Vec<i64> = t.entries.iter().map(|(s, _)| s.try_into().unwrap()).collect();
        assert_eq!(vals, oracle);
        assert_eq!(vals, [-31, -19, -11, -1, 1, 11, 19, 31]);
    }

    #[test]
    fn wide_paths_agree() {
        // 30 primes need more than 125 bits, exercising the fixed-width words
        let p = primes(30);
        let scale = lcm_of(&p.terms);
        let w = weights(&p.terms, &scale);
        let t = BigInt::zero();
        let wide = meet_in_the_middle::<super::super::wide::Wide<4>>(&w, &t);
        let big = meet_in_the_middle::<BigInt>(&w, &t);
        assert_eq!(wide, big);
        assert_eq!(
            wide.0.to_string(),
            "24244850423688161715955346535954790877"
        );
    }
}
