//! Sampling `X_N = Σ s_n / b_n` with independent fair signs.
//!
//! Sample `i` draws its signs from ChaCha8 keyed by the seed, on stream `i`,
//! so any sample can be regenerated alone and the result does not depend on
//! how samples are spread across threads. Signs are consumed a byte at a
//! time against precomputed tables of the 256 signed sums of each block of
//! eight consecutive terms.

use num_bigint::BigInt;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::DensityEvaluator;
use crate::error::{Error, Result};
use crate::exact::{enumerate_sums_with, ExactValue, SearchLimits};
use crate::sequences::{generate, SequenceSpec, SequenceTerms};

/// Tolerance used for the predicted probability unless told otherwise.
pub const DEFAULT_DENSITY_EPS: f64 = 1e-8;

/// Samples per reduction block.
const BLOCK: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationConfig {
    pub spec: SequenceSpec,
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    /// Half-open `[lo, hi)`.
    pub interval: (f64, f64),
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("N must be at least 1".into()));
        }
        if self.samples == 0 {
            return Err(Error::InvalidInput("samples must be at least 1".into()));
        }
        let (lo, hi) = self.interval;
        if !(lo < hi) {
            return Err(Error::InvalidInput(format!("interval needs lo < hi, got ({lo}, {hi})")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationReport {
    pub samples: u64,
    pub hits: u64,
    pub empirical_prob: f64,
    /// `∫_I g`.
    pub predicted: f64,
    /// `sqrt(p(1 − p)/samples)` with `p` the empirical probability.
    pub standard_error: f64,
    pub z_score: f64,
    pub sample_mean: f64,
    pub sample_variance: f64,
    /// `Σ 1/b_n²`, the exact variance of `X_N`.
    pub variance: f64,
}

/// Signed sums of each block of eight terms, indexed by the sign byte.
struct SignTables {
    tables: Vec<[f64; 256]>,
    bytes: usize,
}

impl SignTables {
    fn new(terms: &[u64]) -> Self {
        let tables = terms
            .chunks(8)
            .map(|chunk| {
                let mut t = [0.0; 256];
                for (byte, slot) in t.iter_mut().enumerate() {
                    // bit j set means s = +1 for the j-th term of the block
                    *slot = chunk
                        .iter()
                        .enumerate()
                        .map(|(j, &b)| if byte >> j & 1 == 1 { 1.0 / b as f64 } else { -1.0 / b as f64 })
                        .sum();
                }
                t
            })
            .collect();
        Self {
            tables,
            bytes: terms.len().div_ceil(8),
        }
    }

    /// `X_N` for one sample, by Kahan summation over the blocks.
    fn sample(&self, rng: &mut ChaCha8Rng, buf: &mut [u8]) -> f64 {
        rng.fill_bytes(buf);
        let mut sum = 0.0;
        let mut carry = 0.0;
        for (table, &byte) in self.tables.iter().zip(buf.iter()) {
            let y = table[byte as usize] - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
        sum
    }
}

fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `visit` over every sample in fixed blocks and folds the block results
/// in block order.
fn sample_blocks<A, F, M>(terms: &[u64], samples: u64, seed: u64, empty: impl Fn() -> A + Sync, visit: F, merge: M) -> A
where
    A: Send,
    F: Fn(&mut A, f64) + Sync,
    M: Fn(A, A) -> A,
{
    let tables = SignTables::new(terms);
    let blocks = samples.div_ceil(BLOCK as u64);
    let parts: Vec<A> = (0..blocks)
        .into_par_iter()
        .map(|blk| {
            let mut acc = empty();
            let mut buf = vec![0u8; tables.bytes];
            let start = blk * BLOCK as u64;
            let end = (start + BLOCK as u64).min(samples);
            for i in start..end {
                let x = tables.sample(&mut rng_for(seed, i), &mut buf);
                visit(&mut acc, x);
            }
            acc
        })
        .collect();
    parts.into_iter().fold(empty(), merge)
}

#[derive(Clone, Copy, Default)]
struct Moments {
    hits: u64,
    sum: f64,
    sum_sq: f64,
}

/// Monte Carlo estimate of `P[X_N ∈ I]` next to `∫_I g`.
pub fn simulate(config: &SimulationConfig) -> Result<SimulationReport> {
    config.validate()?;
    let ev = DensityEvaluator::new(&config.spec, DEFAULT_DENSITY_EPS)?;
    simulate_with(config, &ev)
}

/// As [`simulate`], with a caller-supplied density evaluator.
pub fn simulate_with(config: &SimulationConfig, ev: &DensityEvaluator) -> Result<SimulationReport> {
    config.validate()?;
    let terms = generate(&config.spec, config.n)?;
    let (lo, hi) = config.interval;
    let m = sample_blocks(
        &terms.terms,
        config.samples,
        config.seed,
        Moments::default,
        |acc, x| {
            if lo <= x && x < hi {
                acc.hits += 1;
            }
            acc.sum += x;
            acc.sum_sq += x * x;
        },
        |a, b| Moments {
            hits: a.hits + b.hits,
            sum: a.sum + b.sum,
            sum_sq: a.sum_sq + b.sum_sq,
        },
    );
    let n = config.samples as f64;
    let p = m.hits as f64 / n;
    let mean = m.sum / n;
    let sample_variance = if config.samples > 1 {
        (m.sum_sq - n * mean * mean) / (n - 1.0)
    } else {
        0.0
    };
    let predicted = ev.interval_probability(lo, hi)?.value;
    let standard_error = (p * (1.0 - p) / n).sqrt();
    let diff = p - predicted;
    let z_score = if standard_error > 0.0 {
        diff / standard_error
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    };
    Ok(SimulationReport {
        samples: config.samples,
        hits: m.hits,
        empirical_prob: p,
        predicted,
        standard_error,
        z_score,
        sample_mean: mean,
        sample_variance,
        variance: terms.terms.iter().map(|&b| (b as f64).powi(-2)).sum(),
    })
}

/// One bin of a histogram of `X_N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HistogramRow {
    pub center: f64,
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
    /// `count / (samples · width)`.
    pub empirical_density: f64,
    /// Standard error of `empirical_density`.
    pub standard_error: f64,
    /// `g(center)`.
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub samples: u64,
    /// Samples that fell outside every bin.
    pub outside: u64,
    pub rows: Vec<HistogramRow>,
}

/// Histogram of `X_N` over `bins` equal bins spanning the configured interval.
pub fn histogram(config: &SimulationConfig, bins: usize, ev: &DensityEvaluator) -> Result<Histogram> {
    config.validate()?;
    if bins < 2 {
        return Err(Error::InvalidInput("need at least two bins".into()));
    }
    let terms = generate(&config.spec, config.n)?;
    let (lo, hi) = config.interval;
    let width = (hi - lo) / bins as f64;
    let bin_of = |x: f64| -> Option<usize> {
        if !(lo <= x && x < hi) {
            return None;
        }
        Some((((x - lo) / width) as usize).min(bins - 1))
    };
    let counts = sample_blocks(
        &terms.terms,
        config.samples,
        config.seed,
        || vec![0u64; bins + 1],
        |acc, x| match bin_of(x) {
            Some(i) => acc[i] += 1,
            None => acc[bins] += 1,
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    );
    let n = config.samples as f64;
    let rows = (0..bins)
        .into_par_iter()
        .map(|i| {
            let b_lo = lo + width * i as f64;
            let b_hi = if i + 1 == bins { hi } else { lo + width * (i + 1) as f64 };
            let center = 0.5 * (b_lo + b_hi);
            let p = counts[i] as f64 / n;
            HistogramRow {
                center,
                lo: b_lo,
                hi: b_hi,
                count: counts[i],
                empirical_density: p / (b_hi - b_lo),
                standard_error: (p * (1.0 - p) / n).sqrt() / (b_hi - b_lo),
                g: ev.density(center).g,
            }
        })
        .collect();
    Ok(Histogram {
        samples: config.samples,
        outside: counts[bins],
        rows,
    })
}

/// `P[X_N ∈ [lo, hi)]` by enumerating every sign vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactProbability {
    pub hits: u64,
    pub outcomes: u64,
    pub probability: f64,
}

pub fn exact_interval_probability(terms: &SequenceTerms, lo: f64, hi: f64) -> Result<ExactProbability> {
    let table = enumerate_sums_with(terms, &SearchLimits::default())?;
    let lo = ExactValue::from_f64(lo)?;
    let hi = ExactValue::from_f64(hi)?;
    let scale = ExactValue::from_integer(table.scale.clone());
    // compare scaled integers: lo·L ≤ s < hi·L
    let lo_s = lo.as_rational() * scale.as_rational();
    let hi_s = hi.as_rational() * scale.as_rational();
    let hits = table
        .entries
        .iter()
        .filter(|(s, _)| {
            let s = num_rational::BigRational::from_integer(BigInt::clone(s));
            lo_s <= s && s < hi_s
        })
        .count() as u64;
    let outcomes = table.entries.len() as u64;
    Ok(ExactProbability {
        hits,
        outcomes,
        probability: hits as f64 / outcomes as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(spec: SequenceSpec, n: usize, samples: u64, interval: (f64, f64)) -> SimulationConfig {
        SimulationConfig {
            spec,
            n,
            samples,
            seed: 7,
            interval,
        }
    }

    #[test]
    fn tables_match_direct_sums() {
        let terms: Vec<u64> = (1..=19).collect();
        let t = SignTables::new(&terms);
        let mut rng = rng_for(3, 11);
        let mut buf = vec![0u8; t.bytes];
        let x = t.sample(&mut rng, &mut buf);
        let direct: f64 = terms
            .iter()
            .enumerate()
            .map(|(i, &b)| if buf[i / 8] >> (i % 8) & 1 == 1 { 1.0 / b as f64 } else { -1.0 / b as f64 })
            .sum();
        assert!((x - direct).abs() < 1e-15);
    }

    #[test]
    fn single_term_is_a_coin() {
        let terms = generate(&SequenceSpec::Primes, 1).unwrap();
        let m = sample_blocks(&terms.terms, 100_000, 1, || 0u64, |a, x| *a += (x > 0.0) as u64, |a, b| a + b);
        let p = m as f64 / 1e5;
        assert!((p - 0.5).abs() < 5.0 * (0.25f64 / 1e5).sqrt());
        let e = exact_interval_probability(&terms, 0.0, 1.0).unwrap();
        assert_eq!((e.hits, e.outcomes), (1, 2));
    }

    #[test]
    fn blocks_do_not_depend_on_thread_count() {
        let terms = generate(&SequenceSpec::Primes, 40).unwrap();
        let run = || {
            sample_blocks(&terms.terms, 3 * BLOCK as u64 + 5, 99, Vec::new, |a: &mut Vec<f64>, x| a.push(x), |mut a, b| {
                a.extend(b);
                a
            })
        };
        let many = run();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
        assert_eq!(many, one);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(config(SequenceSpec::Primes, 0, 10, (0.0, 1.0)).validate().is_err());
        assert!(config(SequenceSpec::Primes, 3, 0, (0.0, 1.0)).validate().is_err());
        assert!(config(SequenceSpec::Primes, 3, 10, (1.0, 1.0)).validate().is_err());
    }

    #[test]
    fn exhaustive_is_symmetric() {
        let terms = generate(&SequenceSpec::Primes, 9).unwrap();
        let left = exact_interval_probability(&terms, -0.3, 0.0).unwrap();
        let right = exact_interval_probability(&terms, 0.0, 0.3).unwrap();
        // no sum vanishes for distinct primes, so the half-open ends do not matter
        assert_eq!(left.hits, right.hits);
    }
}
