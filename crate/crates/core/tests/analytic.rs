use std::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use signed_harmonic::analytic::{
    check_decay, check_limit_ratio, check_sandwich, density, rho_limit, DecayOptions, DensityEvaluator,
};
use signed_harmonic::montecarlo::{exact_interval_probability, histogram, simulate_with, SimulationConfig};
use signed_harmonic::sequences::generate;
use signed_harmonic::SequenceSpec;

const HARMONIC: SequenceSpec = SequenceSpec::ArithmeticProgression { a: 1, q: 1 };

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

#[test]
fn sandwich_holds_on_primes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [100, 1000] {
        let terms = generate(&SequenceSpec::Primes, n).unwrap();
        for _ in 0..200 {
            let x = uniform(&mut rng) * 1e3;
            let delta = uniform(&mut rng) * 0.5;
            let s = check_sandwich(&terms, delta, x);
            assert!(s.holds, "{s:?}");
        }
    }
}

#[test]
fn limit_ratio_on_primes() {
    for n in [1000, 10_000] {
        let r = check_limit_ratio(&SequenceSpec::Primes, n, 20.0, 100).unwrap();
        assert!(r.passed, "N={n}");
        let worst = r.points.iter().map(|p| (p.deviation + p.truncation) / p.allowed.max(1e-300)).fold(0.0, f64::max);
        assert!(worst < 1.0);
    }
}

/// `ρ(x)` for `b_n = n` from `M` explicit factors and the leading term of
/// `Σ_{n>M} log cos(πx/n) ≈ −(πx)²/(2M)`.
fn harmonic_rho(x: f64, m: u64) -> f64 {
    let head: f64 = (1..=m).map(|n| (PI * x / n as f64).cos()).product();
    head * (-(PI * x).powi(2) / (2.0 * m as f64 + 1.0)).exp()
}

fn composite_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, steps: usize) -> f64 {
    let h = (b - a) / steps as f64;
    let inner: f64 = (1..steps).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

#[test]
fn harmonic_density_matches_direct_integration() {
    let ev = DensityEvaluator::new(&HARMONIC, 1e-8).unwrap();
    let m = 20_000;
    let rho: Vec<(f64, f64)> = (0..=2000).map(|i| i as f64 * 2e-3).map(|u| (u, harmonic_rho(2.0 * u, m))).collect();
    for x in [0.0, 0.5, 1.0, 1.5] {
        let h = 2e-3;
        let f: Vec<f64> = rho.iter().map(|&(u, r)| 2.0 * (2.0 * PI * u * x).cos() * r).collect();
        let direct = (f[0] + f[f.len() - 1]
            + f[1..f.len() - 1].iter().enumerate().map(|(i, v)| v * if i % 2 == 0 { 4.0 } else { 2.0 }).sum::<f64>())
            * h
            / 3.0;
        let g = ev.density(x).g;
        assert!((g - direct).abs() < 1e-6, "x={x}: {g} vs {direct}");
    }
    // the random harmonic series has density 1/8 at 2 to many more digits than checked here
    assert!((ev.density(2.0).g - 0.125).abs() < 1e-7);
    assert!(composite_simpson(|u| harmonic_rho(2.0 * u, 2000).abs(), 4.0, 6.0, 200) < 1e-9);
}

#[test]
fn density_is_deterministic() {
    let a = density(&SequenceSpec::Primes, 0.3, 1e-6).unwrap();
    let b = density(&SequenceSpec::Primes, 0.3, 1e-6).unwrap();
    assert_eq!(a, b);
    assert!(a.g > 0.0);
}

#[test]
fn rho_limit_tail_bound_covers_a_longer_product() {
    let coarse = rho_limit(&SequenceSpec::Primes, 3.0, 1e-4).unwrap();
    let fine = rho_limit(&SequenceSpec::Primes, 3.0, 1e-8).unwrap();
    assert!((coarse.value - fine.value).abs() <= coarse.tail_bound + fine.tail_bound);
    assert!(fine.tail_bound <= 1e-8);
}

#[test]
fn simulation_matches_exhaustive_probability() {
    let ev = DensityEvaluator::new(&SequenceSpec::Primes, 1e-6).unwrap();
    for (n, lo, hi) in [(6, -0.3, 0.3), (12, -0.1, 0.1), (12, 0.05, 0.4)] {
        let terms = generate(&SequenceSpec::Primes, n).unwrap();
        let exact = exact_interval_probability(&terms, lo, hi).unwrap();
        let config = SimulationConfig {
            spec: SequenceSpec::Primes,
            n,
            samples: 1_000_000,
            seed: 11,
            interval: (lo, hi),
        };
        let r = simulate_with(&config, &ev).unwrap();
        let se = (exact.probability * (1.0 - exact.probability) / config.samples as f64).sqrt();
        assert!(
            (r.empirical_prob - exact.probability).abs() <= 5.0 * se,
            "N={n}: {} vs {}",
            r.empirical_prob,
            exact.probability
        );
    }
}

#[test]
fn histogram_partitions_the_samples() {
    let ev = DensityEvaluator::new(&SequenceSpec::Primes, 1e-6).unwrap();
    let config = SimulationConfig {
        spec: SequenceSpec::Primes,
        n: 500,
        samples: 200_000,
        seed: 5,
        interval: (-1.0, 1.0),
    };
    let h = histogram(&config, 40, &ev).unwrap();
    let inside: u64 = h.rows.iter().map(|r| r.count).sum();
    assert_eq!(inside + h.outside, config.samples);
    assert!(h.rows.windows(2).all(|w| w[0].hi == w[1].lo));
    let r = simulate_with(&config, &ev).unwrap();
    assert_eq!(r.hits, inside);
    for row in &h.rows {
        assert!((row.empirical_density - row.g).abs() <= 5.0 * row.standard_error + 0.02, "{row:?}");
    }
}

#[test]
fn decay_check_reports_its_range() {
    let default = check_decay(&SequenceSpec::Primes, 50, 1.0, 64, &DecayOptions::default()).unwrap();
    assert!(default.c_prime_placeholder);
    assert!(default.degenerate);
    assert_eq!(default.samples, 1);

    let wide = DecayOptions {
        c_prime: Some(0.5),
        ..DecayOptions::default()
    };
    let r = check_decay(&SequenceSpec::Primes, 50, 0.0, 64, &wide).unwrap();
    assert!(!r.degenerate && r.passed);
    assert_eq!(r.samples, 64);
    assert!(r.range.1 <= 1e6);
    let steep = check_decay(&SequenceSpec::Primes, 50, 50.0, 64, &wide).unwrap();
    assert!(!steep.passed);
}
