//! Signed harmonic sums over sparse integer sequences.
//!
//! The crate answers two families of questions about sums `Σ s_n / b_n` with
//! `s_n ∈ {−1, +1}` and `b_n` drawn from primes, squarefree `k`-almost-primes,
//! non-primes, arithmetic progressions, or a user-supplied list:
//!
//! * exact ones ([`exact`]): the smallest distance `m_N(τ)` from a rational
//!   target, the smallest gap `Δ_N` between distinct sums, and the two-stage
//!   approximation over non-primes followed by primes;
//! * numerical ones ([`analytic`], [`montecarlo`]): the cosine product
//!   `ρ_N(x) = Π cos(πx/b_n)`, the limiting density `g` of the random sum, and
//!   finite-range checks of the inequalities that control them.
//!
//! ```
//! use signed_harmonic::{exact, sequences::{generate, SequenceSpec}, ExactValue};
//!
//! let primes = generate(&SequenceSpec::Primes, 10).unwrap();
//! let best = exact::min_signed_sum(&primes, &ExactValue::zero()).unwrap();
//! assert_eq!(best.scaled_num.to_string(), "4919311");
//! ```

pub mod analytic;
pub mod cli;
pub mod error;
pub mod exact;
pub mod montecarlo;
pub mod sequences;

pub use error::{Error, Result};
pub use exact::{ExactValue, SignVector};
pub use sequences::{SequenceSpec, SequenceTerms};
