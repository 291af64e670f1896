//! The `signed-harmonic` command line.
//!
//! [`run`] parses arguments, runs one subcommand, and writes its report to
//! the given stream. Exit codes: 0 success, 2 usage or input error, 3 cap or
//! resource error, 4 numerical truncation failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;

use crate::analytic::{
    check_decay, check_exponential_bound, check_limit_ratio, check_sandwich, expectation_identity,
    rho_limit, rho_n, DecayOptions, DensityEvaluator,
};
use crate::error::{Error, Result};
use crate::exact::{
    decay_profile, fit_line, min_gap_with, min_signed_sum_with, two_stage_approx, ExactValue,
    SearchLimits,
};
use crate::montecarlo::{histogram, simulate_with, SimulationConfig};
use crate::sequences::{count_up_to, generate, SequenceSpec};

/// Environment variable that fixes the worker thread count.
pub const THREADS_ENV: &str = "HARMONIC_THREADS";

#[derive(Debug, Parser)]
#[command(name = "signed-harmonic", version, about = "Signed harmonic sums: exact minima, gaps, and limiting densities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Emit::Tsv, global = true)]
    pub emit: Emit,

    /// Lift the desk-scale caps on N.
    #[arg(long, global = true)]
    pub force: bool,

    /// Largest N for signed-sum searches.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub minsum_cap: Option<u64>,

    /// Largest N for gap searches.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub gap_cap: Option<u64>,

    /// Memory budget for the exact searches, in bytes.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub memory_budget: Option<u64>,

    /// Worker threads; overrides HARMONIC_THREADS.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Tsv,
    Json,
    Bfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Primes,
    /// Squarefree products of k distinct primes.
    Pk,
    /// Integers with exactly k distinct prime factors.
    OmegaK,
    Nonprimes,
    /// a, a + q, a + 2q, …
    Ap,
    /// Terms read from --file.
    File,
}

#[derive(Debug, Clone, Args)]
pub struct KindArgs {
    #[arg(long, value_enum, default_value_t = Kind::Primes)]
    pub kind: Kind,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, default_value_t = 1)]
    pub a: u64,
    #[arg(long, default_value_t = 1)]
    pub q: u64,
    /// One term per line, or `index term` pairs; `#` starts a comment.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

impl KindArgs {
    pub fn spec(&self) -> Result<SequenceSpec> {
        let spec = match self.kind {
            Kind::Primes => SequenceSpec::Primes,
            Kind::Pk => SequenceSpec::KAlmostSquarefree(self.k),
            Kind::OmegaK => SequenceSpec::KDistinctFactors(self.k),
            Kind::Nonprimes => SequenceSpec::NonPrimes,
            Kind::Ap => SequenceSpec::ArithmeticProgression { a: self.a, q: self.q },
            Kind::File => {
                let path = self
                    .file
                    .as_ref()
                    .ok_or_else(|| Error::InvalidInput("--kind file needs --file".into()))?;
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
                SequenceSpec::Custom(parse_terms(&text)?)
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn parse_terms(text: &str) -> Result<Vec<u64>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            let last = l.split_whitespace().last().unwrap_or(l);
            last.parse::<u64>()
                .map_err(|_| Error::InvalidInput(format!("bad term {last:?}")))
        })
        .collect()
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List terms of a sequence.
    Seq {
        #[command(flatten)]
        kind: KindArgs,
        /// Number of terms.
        #[arg(long, conflicts_with = "upto")]
        n: Option<usize>,
        /// All terms up to this bound.
        #[arg(long)]
        upto: Option<u64>,
    },
    /// Exact smallest |Σ s_n/b_n − τ| over all sign choices.
    Minsum {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "0")]
        tau: String,
    },
    /// Exact smallest non-zero |Σ ε_n/b_n| with ε_n ∈ {−1, 0, 1}.
    Gap {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long)]
        n: usize,
    },
    /// Smallest signed sums over the first N primes, scaled by p_1⋯p_N.
    Table1 {
        #[arg(long)]
        upto: usize,
        #[arg(long, default_value_t = 1)]
        from: usize,
    },
    /// Smallest gaps over the first N primes, scaled by p_1⋯p_N.
    Table3 {
        #[arg(long)]
        upto: usize,
        #[arg(long, default_value_t = 1)]
        from: usize,
    },
    /// log m_N(τ) for N = 1..n-max next to −log²N and −N^{1/(2k+1)}.
    Decay {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value = "0")]
        tau: String,
        /// First N included in the least-squares fit against −log²N.
        #[arg(long, default_value_t = 1)]
        fit_from: usize,
    },
    /// Match τ with the non-primes up to N, then correct with the primes.
    TwoStage {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "0")]
        tau: String,
    },
    /// ρ_N(x), or the limit ρ(x) when --n is omitted.
    Rho {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 1e-10)]
        eps: f64,
    },
    /// The limiting density g at a point or on a grid.
    Density {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "grid")]
        x: Option<f64>,
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
        /// `lo:hi:steps`, evaluated at steps + 1 equally spaced points.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// Sampled checks of the bounds on ρ_N; reports JSON.
    Check {
        #[arg(value_enum)]
        which: CheckKind,
        #[command(flatten)]
        params: CheckParams,
    },
    /// Monte Carlo sampling of X_N against the density g.
    Mc {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, allow_hyphen_values = true, default_value_t = -0.1)]
        lo: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.1)]
        hi: f64,
        /// Histogram over [lo, hi) instead of a single interval.
        #[arg(long)]
        bins: Option<usize>,
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    /// |ρ_N(x)| ≤ exp(−π²δ²/2 · #S(N, δ, x)).
    ExpBound,
    /// N/2 − D(N, y(δ), x) − 1 ≤ #S(N, δ, x) ≤ N.
    Sandwich,
    /// |ρ_N(x)| ≤ x^{−A} on a log grid.
    Decay,
    /// |ρ_N(x)/ρ(x) − 1| ≤ K x²/N on [0, √N].
    LimitRatio,
    /// E[Φ(X_N)] against ∫ Φ̂(ξ) ρ_N(2ξ) dξ.
    Identity,
}

#[derive(Debug, Clone, Args)]
pub struct CheckParams {
    #[command(flatten)]
    pub kind: KindArgs,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    /// Single point; random points are drawn when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Random (x, δ) pairs.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Upper end for random x.
    #[arg(long, default_value_t = 1000.0)]
    pub x_max: f64,
    /// Decay exponent A.
    #[arg(long = "exponent", default_value_t = 1.0)]
    pub exponent: f64,
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    #[arg(long)]
    pub x_lo: Option<f64>,
    #[arg(long, default_value_t = 1e6)]
    pub x_cap: f64,
    #[arg(long)]
    pub c_prime: Option<f64>,
    /// Constant K of the ratio check.
    #[arg(long = "ratio-const", default_value_t = 20.0)]
    pub ratio_const: f64,
}

/// Parses `argv` (including the program name), runs the command, and returns
/// the exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut (dyn Write + Send), err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let threads = cli
        .threads
        .map(|t| t as usize)
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()))
        .filter(|&t| t > 0);
    let result = match threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, out)),
            Err(e) => Err(Error::InvalidInput(format!("cannot start {t} threads: {e}"))),
        },
        None => dispatch(&cli, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn limits(cli: &Cli) -> SearchLimits {
    let mut l = if cli.force {
        SearchLimits::forced(SearchLimits::default().memory_budget)
    } else {
        SearchLimits::default()
    };
    if let Some(c) = cli.minsum_cap {
        l.max_terms = c as usize;
    }
    if let Some(c) = cli.gap_cap {
        l.gap_max_terms = c as usize;
    }
    if let Some(m) = cli.memory_budget {
        l.memory_budget = m;
    }
    l
}

fn io(e: std::io::Error) -> Error {
    Error::InvalidInput(format!("write failed: {e}"))
}

fn emit_json(out: &mut dyn Write, v: &impl Serialize) -> Result<()> {
    // going through Value sorts the keys
    let v = serde_json::to_value(v).map_err(|e| Error::InvalidInput(e.to_string()))?;
    writeln!(out, "{v}").map_err(io)
}

fn parse_tau(s: &str) -> Result<ExactValue> {
    s.parse()
}

fn need_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    Ok(())
}

/// `{"n", "scaled_num", "den", "witness", "tau"}` for one search.
fn search_json(n: usize, scaled_num: &BigInt, den: &BigInt, witness: String, tau: &ExactValue) -> Value {
    json!({
        "n": n,
        "scaled_num": scaled_num.to_string(),
        "den": den.to_string(),
        "witness": witness,
        "tau": tau.to_string(),
    })
}

fn trits(w: &[i8]) -> String {
    w.iter()
        .map(|&t| match t {
            1 => '+',
            -1 => '-',
            _ => '0',
        })
        .collect()
}

fn dispatch(cli: &Cli, out: &mut (dyn Write + Send)) -> Result<()> {
    let lim = limits(cli);
    match &cli.command {
        Command::Seq { kind, n, upto } => {
            let spec = kind.spec()?;
            let n = match (n, upto) {
                (Some(n), _) => *n,
                (None, Some(t)) => count_up_to(&spec, *t)? as usize,
                (None, None) => return Err(Error::InvalidInput("seq needs --n or --upto".into())),
            };
            let terms = if n == 0 { Vec::new() } else { generate(&spec, n)?.terms };
            match cli.emit {
                Emit::Json => emit_json(out, &json!({ "kind": spec.to_string(), "terms": terms }))?,
                Emit::Bfile => {
                    for (i, b) in terms.iter().enumerate() {
                        writeln!(out, "{} {b}", i + 1).map_err(io)?;
                    }
                }
                Emit::Tsv => {
                    for b in &terms {
                        writeln!(out, "{b}").map_err(io)?;
                    }
                }
            }
        }
        Command::Minsum { kind, n, tau } => {
            need_n(*n)?;
            let tau = parse_tau(tau)?;
            let terms = generate(&kind.spec()?, *n)?;
            let r = min_signed_sum_with(&terms, &tau, &lim)?;
            match cli.emit {
                Emit::Json => emit_json(out, &search_json(*n, &r.scaled_num, &r.scale, r.witness.to_string(), &tau))?,
                Emit::Bfile => writeln!(out, "{n} {}", r.scaled_num).map_err(io)?,
                Emit::Tsv => writeln!(out, "{n}\t{}\t{}\t{}\t{tau}", r.scaled_num, r.scale, r.witness).map_err(io)?,
            }
        }
        Command::Gap { kind, n } => {
            need_n(*n)?;
            let terms = generate(&kind.spec()?, *n)?;
            let g = min_gap_with(&terms, &lim)?;
            match cli.emit {
                Emit::Json => emit_json(
                    out,
                    &json!({
                        "n": n,
                        "scaled_num": g.scaled_num.to_string(),
                        "den": g.scale.to_string(),
                        "witness": trits(&g.witness),
                    }),
                )?,
                Emit::Bfile => writeln!(out, "{n} {}", g.scaled_num).map_err(io)?,
                Emit::Tsv => writeln!(out, "{n}\t{}\t{}\t{}", g.scaled_num, g.scale, trits(&g.witness)).map_err(io)?,
            }
        }
        Command::Table1 { upto, from } => {
            need_n(*upto)?;
            need_n(*from)?;
            cap_check(*upto, lim.max_terms, "terms in signed-sum search")?;
            let all = generate(&SequenceSpec::Primes, *upto)?;
            let tau = ExactValue::zero();
            for n in *from..=*upto {
                let r = min_signed_sum_with(&all.prefix(n), &tau, &lim)?;
                match cli.emit {
                    Emit::Json => emit_json(out, &search_json(n, &r.scaled_num, &r.scale, r.witness.to_string(), &tau))?,
                    Emit::Bfile => writeln!(out, "{n} {}", r.scaled_num).map_err(io)?,
                    Emit::Tsv => writeln!(out, "{n}\t{}", r.scaled_num).map_err(io)?,
                }
                out.flush().map_err(io)?;
            }
        }
        Command::Table3 { upto, from } => {
            need_n(*upto)?;
            need_n(*from)?;
            cap_check(*upto, lim.gap_max_terms, "terms in gap search")?;
            let all = generate(&SequenceSpec::Primes, *upto)?;
            for n in *from..=*upto {
                let g = min_gap_with(&all.prefix(n), &lim)?;
                match cli.emit {
                    Emit::Json => emit_json(
                        out,
                        &json!({
                            "n": n,
                            "scaled_num": g.scaled_num.to_string(),
                            "den": g.scale.to_string(),
                            "witness": trits(&g.witness),
                        }),
                    )?,
                    Emit::Bfile => writeln!(out, "{n} {}", g.scaled_num).map_err(io)?,
                    Emit::Tsv => writeln!(out, "{n}\t{}", g.scaled_num).map_err(io)?,
                }
                out.flush().map_err(io)?;
            }
        }
        Command::Decay { kind, n_max, tau, fit_from } => {
            need_n(*n_max)?;
            let tau = parse_tau(tau)?;
            let rows = decay_profile(&kind.spec()?, *n_max, &tau, &lim)?;
            let fit_rows: Vec<_> = rows.iter().filter(|r| r.n >= *fit_from && r.log_min.is_finite()).collect();
            let fit = (fit_rows.len() >= 2).then(|| {
                let xs: Vec<f64> = fit_rows.iter().map(|r| r.log_squared).collect();
                let ys: Vec<f64> = fit_rows.iter().map(|r| r.log_min).collect();
                fit_line(&xs, &ys)
            });
            match cli.emit {
                Emit::Json => emit_json(out, &json!({ "tau": tau.to_string(), "rows": rows, "fit_vs_log_squared": fit }))?,
                Emit::Bfile => {
                    for r in &rows {
                        writeln!(out, "{} {}", r.n, r.scaled_num).map_err(io)?;
                    }
                }
                Emit::Tsv => {
                    writeln!(out, "n\tlog_min\tneg_log_squared\tneg_power_curve").map_err(io)?;
                    for r in &rows {
                        writeln!(out, "{}\t{}\t{}\t{}", r.n, r.log_min, r.log_squared, r.power_curve).map_err(io)?;
                    }
                }
            }
        }
        Command::TwoStage { n, tau } => {
            let tau = parse_tau(tau)?;
            let r = two_stage_approx(*n, &tau, &lim)?;
            let v = json!({
                "n": n,
                "tau": tau.to_string(),
                "non_primes": r.non_primes,
                "primes": r.primes,
                "stage_one": r.stage_one.to_string(),
                "stage_two": r.stage_two.to_string(),
                "tau_prime": r.tau_prime.to_string(),
                "residual": r.residual.to_string(),
            });
            match cli.emit {
                Emit::Json => emit_json(out, &v)?,
                Emit::Bfile => return Err(Error::InvalidInput("two-stage has no b-file form".into())),
                Emit::Tsv => writeln!(
                    out,
                    "{n}\t{tau}\t{}\t{}\t{}\t{}",
                    r.stage_one, r.stage_two, r.tau_prime, r.residual
                )
                .map_err(io)?,
            }
        }
        Command::Rho { kind, n, x, eps } => {
            let spec = kind.spec()?;
            let r = match n {
                Some(n) => {
                    need_n(*n)?;
                    rho_n(&generate(&spec, *n)?, *x)
                }
                None => rho_limit(&spec, *x, *eps)?,
            };
            match cli.emit {
                Emit::Json => emit_json(out, &r)?,
                Emit::Bfile => return Err(Error::InvalidInput("rho has no b-file form".into())),
                Emit::Tsv => writeln!(out, "{}\t{}\t{}\t{}", r.x, r.value, r.tail_bound, r.terms_used).map_err(io)?,
            }
        }
        Command::Density { kind, x, eps, grid } => {
            let ev = DensityEvaluator::new(&kind.spec()?, *eps)?;
            let xs = match grid {
                Some(g) => parse_grid(g)?,
                None => vec![x.expect("clap enforces --x or --grid")],
            };
            let samples: Vec<_> = xs.iter().map(|&x| ev.density(x)).collect();
            match cli.emit {
                Emit::Json => emit_json(out, &samples)?,
                Emit::Bfile => return Err(Error::InvalidInput("density has no b-file form".into())),
                Emit::Tsv => {
                    for s in &samples {
                        writeln!(
                            out,
                            "{}\t{}\t{}\t{}\t{}",
                            s.x, s.g, s.quadrature_error_estimate, s.truncation.m, s.truncation.u
                        )
                        .map_err(io)?;
                    }
                }
            }
        }
        Command::Check { which, params } => run_check(*which, params, out)?,
        Command::Mc { kind, n, samples, seed, lo, hi, bins, eps } => {
            let config = SimulationConfig {
                spec: kind.spec()?,
                n: *n,
                samples: *samples,
                seed: *seed,
                interval: (*lo, *hi),
            };
            config.validate()?;
            let ev = DensityEvaluator::new(&config.spec, *eps)?;
            match bins {
                Some(b) => {
                    let h = histogram(&config, *b, &ev)?;
                    match cli.emit {
                        Emit::Json => emit_json(out, &h)?,
                        Emit::Bfile => return Err(Error::InvalidInput("mc has no b-file form".into())),
                        Emit::Tsv => {
                            for r in &h.rows {
                                writeln!(out, "{}\t{}\t{}\t{}", r.center, r.empirical_density, r.g, r.standard_error)
                                    .map_err(io)?;
                            }
                        }
                    }
                }
                None => {
                    let r = simulate_with(&config, &ev)?;
                    match cli.emit {
                        Emit::Json => emit_json(out, &r)?,
                        Emit::Bfile => return Err(Error::InvalidInput("mc has no b-file form".into())),
                        Emit::Tsv => writeln!(
                            out,
                            "{}\t{}\t{}\t{}\t{}\t{}",
                            r.empirical_prob, r.predicted, r.standard_error, r.z_score, r.sample_mean, r.sample_variance
                        )
                        .map_err(io)?,
                    }
                }
            }
        }
    }
    Ok(())
}

fn cap_check(n: usize, cap: usize, what: &'static str) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded {
            what,
            requested: n as u64,
            cap: cap as u64,
        });
    }
    Ok(())
}

fn parse_grid(g: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidInput(format!("grid must be lo:hi:steps, got {g:?}"));
    let parts: Vec<&str> = g.split(':').collect();
    let [lo, hi, steps] = parts[..] else {
        return Err(bad());
    };
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    let steps: usize = steps.parse().map_err(|_| bad())?;
    if steps == 0 || !(lo <= hi) {
        return Err(bad());
    }
    Ok((0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect())
}

/// Uniform draws in `[0, 1)` from a seeded ChaCha8 stream.
fn uniforms(seed: u64) -> impl FnMut() -> f64 {
    use rand_core::{RngCore, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    move || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn run_check(which: CheckKind, p: &CheckParams, out: &mut dyn Write) -> Result<()> {
    let spec = p.kind.spec()?;
    need_n(p.n)?;
    let points = |p: &CheckParams| -> Vec<(f64, f64)> {
        match (p.x, p.delta) {
            (Some(x), Some(d)) => vec![(x, d)],
            _ => {
                let mut u = uniforms(p.seed);
                (0..p.samples)
                    .map(|_| {
                        let x = p.x.unwrap_or_else(|| u() * p.x_max);
                        let d = p.delta.unwrap_or_else(|| u() * 0.5);
                        (x, d)
                    })
                    .collect()
            }
        }
    };
    let report = match which {
        CheckKind::ExpBound => {
            let terms = generate(&spec, p.n)?;
            let pts = points(p);
            let violations: Vec<_> = pts
                .iter()
                .filter(|&&(x, d)| !check_exponential_bound(&terms, d, x))
                .map(|&(x, d)| json!({ "x": x, "delta": d }))
                .collect();
            json!({ "check": "exp-bound", "n": p.n, "samples": pts.len(), "passed": violations.is_empty(), "violations": violations })
        }
        CheckKind::Sandwich => {
            let terms = generate(&spec, p.n)?;
            let pts = points(p);
            let violations: Vec<_> = pts
                .iter()
                .map(|&(x, d)| check_sandwich(&terms, d, x))
                .filter(|s| !s.holds)
                .collect();
            json!({ "check": "sandwich", "n": p.n, "samples": pts.len(), "passed": violations.is_empty(), "violations": violations })
        }
        CheckKind::Decay => {
            let opts = DecayOptions {
                x_lo: p.x_lo,
                x_cap: p.x_cap,
                c_prime: p.c_prime,
            };
            serde_json::to_value(check_decay(&spec, p.n, p.exponent, p.grid, &opts)?)
                .map_err(|e| Error::InvalidInput(e.to_string()))?
        }
        CheckKind::LimitRatio => serde_json::to_value(check_limit_ratio(&spec, p.n, p.ratio_const, 100)?)
            .map_err(|e| Error::InvalidInput(e.to_string()))?,
        CheckKind::Identity => serde_json::to_value(expectation_identity(&generate(&spec, p.n)?)?)
            .map_err(|e| Error::InvalidInput(e.to_string()))?,
    };
    emit_json(out, &report)
}
