//! Denominator sequences `b_1 < b_2 < …` and their growth envelopes.

mod sieve;

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

pub use sieve::is_prime;

/// A family of strictly increasing positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SequenceSpec {
    Primes,
    /// Products of exactly `k` distinct primes (squarefree).
    KAlmostSquarefree(u32),
    /// Integers with exactly `k` distinct prime factors, multiplicity ignored.
    KDistinctFactors(u32),
    /// 1, 4, 6, 8, 9, … (every positive integer that is not prime).
    NonPrimes,
    /// `a, a + q, a + 2q, …`
    ArithmeticProgression { a: u64, q: u64 },
    Custom(Vec<u64>),
}

impl SequenceSpec {
    /// Checks the structural invariants of the spec itself.
    pub fn validate(&self) -> Result<()> {
        match self {
            SequenceSpec::KAlmostSquarefree(0) | SequenceSpec::KDistinctFactors(0) => {
                Err(Error::InvalidSpec("k must be at least 1".into()))
            }
            SequenceSpec::ArithmeticProgression { a, q } if *a == 0 || *q == 0 => Err(
                Error::InvalidSpec("arithmetic progression needs a >= 1 and q >= 1".into()),
            ),
            SequenceSpec::Custom(terms) => {
                if terms.first() == Some(&0) {
                    return Err(Error::InvalidSpec("terms must be positive".into()));
                }
                if let Some(w) = terms.windows(2).find(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidSpec(format!(
                        "terms must be strictly increasing, found {} then {}",
                        w[0], w[1]
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// The `k` of the factor-count kinds; primes count as `k = 1`.
    pub fn k(&self) -> Option<u32> {
        match self {
            SequenceSpec::Primes => Some(1),
            SequenceSpec::KAlmostSquarefree(k) | SequenceSpec::KDistinctFactors(k) => Some(*k),
            _ => None,
        }
    }

    /// An unbounded (up to 64 bits) stream of the terms, in increasing order.
    pub fn terms(&self) -> Result<Box<dyn Iterator<Item = u64> + Send>> {
        self.validate()?;
        Ok(match self {
            SequenceSpec::Primes
            | SequenceSpec::NonPrimes
            | SequenceSpec::KAlmostSquarefree(_)
            | SequenceSpec::KDistinctFactors(_) => Box::new(sieve::SievedTerms::new(self.clone())),
            SequenceSpec::ArithmeticProgression { a, q } => {
                let (a, q) = (*a, *q);
                Box::new(
                    (0u64..)
                        .map_while(move |i| i.checked_mul(q).and_then(|d| d.checked_add(a))),
                )
            }
            SequenceSpec::Custom(terms) => Box::new(terms.clone().into_iter()),
        })
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Primes => write!(f, "primes"),
            SequenceSpec::KAlmostSquarefree(k) => write!(f, "pk(k={k})"),
            SequenceSpec::KDistinctFactors(k) => write!(f, "omega-k(k={k})"),
            SequenceSpec::NonPrimes => write!(f, "nonprimes"),
            SequenceSpec::ArithmeticProgression { a, q } => write!(f, "ap(a={a},q={q})"),
            SequenceSpec::Custom(t) => write!(f, "custom({} terms)", t.len()),
        }
    }
}

/// The first `N` terms of a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceTerms {
    pub spec: SequenceSpec,
    pub terms: Vec<u64>,
}

impl SequenceTerms {
    /// Wraps an explicit list, checking that it is strictly increasing and positive.
    pub fn from_custom(terms: Vec<u64>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidSpec("empty term list".into()));
        }
        let spec = SequenceSpec::Custom(terms.clone());
        spec.validate()?;
        Ok(Self { spec, terms })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The first `n` terms as a new sequence (same spec).
    pub fn prefix(&self, n: usize) -> SequenceTerms {
        SequenceTerms {
            spec: self.spec.clone(),
            terms: self.terms[..n.min(self.terms.len())].to_vec(),
        }
    }
}

/// Measured growth: `b_N = N · B(N)` and `B(N) = N^β(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthEnvelope {
    pub n: usize,
    pub big_b: f64,
    pub beta: f64,
}

/// The first `n` terms of `spec`.
pub fn generate(spec: &SequenceSpec, n: usize) -> Result<SequenceTerms> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    let terms: Vec<u64> = spec.terms()?.take(n).collect();
    if terms.len() < n {
        return Err(match spec {
            SequenceSpec::Custom(t) => Error::InvalidInput(format!(
                "custom sequence has {} terms, {} requested",
                t.len(),
                n
            )),
            _ => Error::Overflow(format!("term {} of {} exceeds 64 bits", terms.len() + 1, spec)),
        });
    }
    Ok(SequenceTerms {
        spec: spec.clone(),
        terms,
    })
}

/// `#{n : b_n ≤ t}`.
pub fn count_up_to(spec: &SequenceSpec, t: u64) -> Result<u64> {
    if t == 0 {
        return Err(Error::InvalidInput("t must be at least 1".into()));
    }
    if let SequenceSpec::ArithmeticProgression { a, q } = spec {
        spec.validate()?;
        return Ok(if t < *a { 0 } else { (t - a) / q + 1 });
    }
    Ok(spec.terms()?.take_while(|&b| b <= t).count() as u64)
}

/// `B(N) = b_N / N` and `β(N) = log B(N) / log N`.
pub fn growth_envelope(terms: &SequenceTerms) -> Result<GrowthEnvelope> {
    let n = terms.len();
    if n < 2 {
        return Err(Error::InvalidInput("growth envelope needs N >= 2".into()));
    }
    let big_b = *terms.terms.last().unwrap() as f64 / n as f64;
    Ok(GrowthEnvelope {
        n,
        big_b,
        beta: big_b.ln() / (n as f64).ln(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factor(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    fn brute(n_max: u64, keep: impl Fn(&[(u64, u32)], u64) -> bool) -> Vec<u64> {
        (1..=n_max).filter(|&n| keep(&factor(n), n)).collect()
    }

    #[test]
    fn first_primes() {
        assert_eq!(generate(&SequenceSpec::Primes, 5).unwrap().terms, [2, 3, 5, 7, 11]);
    }

    #[test]
    fn non_primes_start_at_one() {
        assert_eq!(generate(&SequenceSpec::NonPrimes, 3).unwrap().terms, [1, 4, 6]);
    }

    #[test]
    fn squarefree_semiprimes() {
        let got = generate(&SequenceSpec::KAlmostSquarefree(2), 6).unwrap().terms;
        let oracle = brute(22, |f, _| f.len() == 2 && f.iter().all(|&(_, e)| e == 1));
        assert_eq!(got, oracle);
        assert_eq!(got, [6, 10, 14, 15, 21, 22]);
    }

    #[test]
    fn factor_kinds_match_trial_division() {
        for k in 1..=3u32 {
            let sq = brute(5000, |f, _| f.len() == k as usize && f.iter().all(|&(_, e)| e == 1));
            let om = brute(5000, |f, _| f.len() == k as usize);
            assert_eq!(generate(&SequenceSpec::KAlmostSquarefree(k), sq.len()).unwrap().terms, sq);
            assert_eq!(generate(&SequenceSpec::KDistinctFactors(k), om.len()).unwrap().terms, om);
        }
        let np = brute(5000, |f, n| n == 1 || !(f.len() == 1 && f[0].1 == 1));
        assert_eq!(generate(&SequenceSpec::NonPrimes, np.len()).unwrap().terms, np);
    }

    #[test]
    fn counts() {
        assert_eq!(count_up_to(&SequenceSpec::Primes, 100).unwrap(), 25);
        let pk2 = brute(100, |f, _| f.len() == 2 && f.iter().all(|&(_, e)| e == 1)).len();
        assert_eq!(pk2, 30);
        assert_eq!(count_up_to(&SequenceSpec::KAlmostSquarefree(2), 100).unwrap(), 30);
        assert_eq!(count_up_to(&SequenceSpec::NonPrimes, 10).unwrap(), 6);
        let ap = SequenceSpec::ArithmeticProgression { a: 3, q: 4 };
        assert_eq!(count_up_to(&ap, 2).unwrap(), 0);
        assert_eq!(count_up_to(&ap, 15).unwrap(), 4);
        assert!(count_up_to(&SequenceSpec::Primes, 0).is_err());
    }

    #[test]
    fn k_one_is_primes() {
        let p = generate(&SequenceSpec::Primes, 10_000).unwrap().terms;
        let k1 = generate(&SequenceSpec::KAlmostSquarefree(1), 10_000).unwrap().terms;
        assert_eq!(p, k1);
        let w1 = generate(&SequenceSpec::KDistinctFactors(1), 6).unwrap().terms;
        assert_eq!(w1, [2, 3, 4, 5, 7, 8]);
    }

    #[test]
    fn landau_ratio_for_semiprimes() {
        let t = 1_000_000u64;
        let count = count_up_to(&SequenceSpec::KAlmostSquarefree(2), t).unwrap() as f64;
        let lt = (t as f64).ln();
        let ratio = count * lt / (t as f64 * lt.ln());
        assert!((0.5..=2.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn envelopes() {
        let p = generate(&SequenceSpec::Primes, 5).unwrap();
        assert!((growth_envelope(&p).unwrap().big_b - 2.2).abs() < 1e-15);
        let ap = generate(&SequenceSpec::ArithmeticProgression { a: 1, q: 1 }, 17).unwrap();
        let e = growth_envelope(&ap).unwrap();
        assert_eq!((e.big_b, e.beta), (1.0, 0.0));
        let s = generate(&SequenceSpec::KAlmostSquarefree(2), 6).unwrap();
        assert!((growth_envelope(&s).unwrap().big_b - 22.0 / 6.0).abs() < 1e-15);
        assert!(growth_envelope(&p.prefix(1)).is_err());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(
            SequenceTerms::from_custom(vec![3, 3, 5]),
            Err(Error::InvalidSpec(_))
        ));
        assert!(SequenceTerms::from_custom(vec![0, 1]).is_err());
        assert!(generate(&SequenceSpec::KAlmostSquarefree(0), 3).is_err());
        assert!(generate(&SequenceSpec::Custom(vec![1, 2]), 3).is_err());
        assert!(generate(&SequenceSpec::Primes, 0).is_err());
    }

    #[test]
    fn ap_overflow_is_reported() {
        let spec = SequenceSpec::ArithmeticProgression { a: u64::MAX - 1, q: 1 };
        assert_eq!(generate(&spec, 2).unwrap().terms, [u64::MAX - 1, u64::MAX]);
        assert!(matches!(generate(&spec, 3), Err(Error::Overflow(_))));
    }
}
