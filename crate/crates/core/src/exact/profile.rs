use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use super::search::{min_signed_sum_with, SearchLimits};
use super::sign::SignVector;
use super::value::ExactValue;
use crate::error::{Error, Result};
use crate::sequences::{count_up_to, generate, SequenceSpec, SequenceTerms};

/// One row of a decay profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayRow {
    pub n: usize,
    #[serde(serialize_with = "super::value::decimal")]
    pub scaled_num: BigInt,
    #[serde(serialize_with = "super::value::decimal")]
    pub scale: BigInt,
    /// `log m_N(τ)`; `-inf` when τ is hit exactly.
    pub log_min: f64,
    /// `−log² N`.
    pub log_squared: f64,
    /// `−N^{1/(2k+1)}`.
    pub power_curve: f64,
}

/// `m_N(τ)` for `N = 1..=n_max`, next to the two reference curves.
pub fn decay_profile(
    spec: &SequenceSpec,
    n_max: usize,
    tau: &ExactValue,
    limits: &SearchLimits,
) -> Result<Vec<DecayRow>> {
    limits.check_terms("terms in decay profile", n_max, limits.max_terms)?;
    let all = generate(spec, n_max)?;
    let k = spec.k().unwrap_or(1) as f64;
    (1..=n_max)
        .map(|n| {
            let r = min_signed_sum_with(&all.prefix(n), tau, limits)?;
            let ln_n = (n as f64).ln();
            Ok(DecayRow {
                n,
                log_min: r.value.ln(),
                scaled_num: r.scaled_num,
                scale: r.scale,
                log_squared: -ln_n * ln_n,
                power_curve: -(n as f64).powf(1.0 / (2.0 * k + 1.0)),
            })
        })
        .collect()
}

/// Least-squares fit `y ≈ intercept + slope · x` with its `R²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> LinearFit {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared: if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) },
    }
}

/// Signs over the non-primes up to `N`, then over the primes up to `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoStageResult {
    pub non_primes: Vec<u64>,
    pub primes: Vec<u64>,
    pub stage_one: SignVector,
    /// `σ_n` over the primes; empty when `N < 2`.
    pub stage_two: SignVector,
    /// `τ' = Σ s_m/c_m − τ`.
    pub tau_prime: ExactValue,
    /// `|τ' − Σ σ_n/p_n|`, equal to `|Σ s_m/c_m − Σ σ_n/p_n − τ|`.
    pub residual: ExactValue,
}

/// First match `τ` with the `N − π(N)` non-primes, then cancel what is left
/// over with the `π(N)` primes.
pub fn two_stage_approx(n: usize, tau: &ExactValue, limits: &SearchLimits) -> Result<TwoStageResult> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    let pi_n = count_up_to(&SequenceSpec::Primes, n as u64)? as usize;
    let m = n - pi_n;
    let non_primes = generate(&SequenceSpec::NonPrimes, m)?;
    let stage_one = min_signed_sum_with(&non_primes, tau, limits)?;
    let tau_prime = &ExactValue::from_rational(stage_one.witness.evaluate(&non_primes.terms)) - tau;
    if tau_prime.abs() > ExactValue::from_integer(1) {
        return Err(Error::RangeUnreachable(format!(
            "best non-prime sum leaves |τ'| = {} > 1",
            tau_prime.abs()
        )));
    }

    let (primes, stage_two, residual) = if pi_n == 0 {
        (Vec::new(), SignVector::all_minus(0)?, tau_prime.abs())
    } else {
        let primes: SequenceTerms = generate(&SequenceSpec::Primes, pi_n)?;
        let r = min_signed_sum_with(&primes, &tau_prime, limits)?;
        (primes.terms, r.witness, r.value)
    };
    debug_assert!(!residual.as_rational().is_negative());
    Ok(TwoStageResult {
        non_primes: non_primes.terms,
        primes,
        stage_one: stage_one.witness,
        stage_two,
        tau_prime,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> ExactValue {
        s.parse().unwrap()
    }

    #[test]
    fn prime_profile_head() {
        let rows = decay_profile(&SequenceSpec::Primes, 5, &ExactValue::zero(), &SearchLimits::default()).unwrap();
        let nums: Vec<String> = rows.iter().map(|r| r.scaled_num.to_string()).collect();
        assert_eq!(nums, ["1", "1", "1", "23", "43"]);
        assert!((rows[3].log_min - (23f64 / 210.0).ln()).abs() < 1e-12);
        assert_eq!(rows[0].log_squared, 0.0);
        assert!((rows[4].power_curve + 5f64.powf(1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn profile_towards_one() {
        let rows = decay_profile(&SequenceSpec::Primes, 2, &ExactValue::from_integer(1), &SearchLimits::default()).unwrap();
        // exhaustive: |±1/2 − 1| ≥ 1/2 and |±1/2 ± 1/3 − 1| ≥ 1/6
        assert_eq!(rows[0].scaled_num, BigInt::from(1));
        assert_eq!(rows[0].scale, BigInt::from(2));
        assert_eq!(rows[1].scaled_num, BigInt::from(1));
        assert_eq!(rows[1].scale, BigInt::from(6));
    }

    #[test]
    fn single_term_profile() {
        let spec = SequenceSpec::KAlmostSquarefree(2);
        let rows = decay_profile(&spec, 1, &ExactValue::zero(), &SearchLimits::default()).unwrap();
        assert_eq!((rows[0].scaled_num.clone(), rows[0].scale.clone()), (BigInt::from(1), BigInt::from(6)));
        assert!((rows[0].power_curve + 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_stage_four_terms() {
        let r = two_stage_approx(4, &ExactValue::zero(), &SearchLimits::default()).unwrap();
        assert_eq!(r.non_primes, [1, 4]);
        assert_eq!(r.primes, [2, 3]);
        assert_eq!(r.tau_prime, v("3/4"));
        assert_eq!(r.residual, v("1/12"));

        let r = two_stage_approx(4, &v("5/4"), &SearchLimits::default()).unwrap();
        assert_eq!(r.tau_prime, ExactValue::zero());
        assert_eq!(r.residual, v("1/6"));
    }

    #[test]
    fn two_stage_degenerate() {
        let r = two_stage_approx(1, &ExactValue::zero(), &SearchLimits::default()).unwrap();
        assert_eq!(r.non_primes, [1]);
        assert!(r.primes.is_empty());
        assert_eq!(r.tau_prime.abs(), ExactValue::from_integer(1));
        assert_eq!(r.residual, ExactValue::from_integer(1));
    }

    #[test]
    fn two_stage_out_of_reach() {
        assert!(matches!(
            two_stage_approx(4, &ExactValue::from_integer(5), &SearchLimits::default()),
            Err(Error::RangeUnreachable(_))
        ));
    }

    #[test]
    fn fit_recovers_a_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x).collect();
        let f = fit_line(&xs, &ys);
        assert!((f.slope + 2.0).abs() < 1e-12 && (f.r_squared - 1.0).abs() < 1e-12);
    }
}
