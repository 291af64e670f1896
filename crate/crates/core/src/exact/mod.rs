//! Exact searches over sign vectors, in big-rational arithmetic throughout.

mod gap;
mod profile;
mod search;
mod sign;
mod value;
pub(crate) mod wide;

pub use gap::{min_gap, min_gap_with, GapResult};
pub use profile::{decay_profile, fit_line, two_stage_approx, DecayRow, LinearFit, TwoStageResult};
pub use search::{
    enumerate_sums, enumerate_sums_with, min_signed_sum, min_signed_sum_with, SearchLimits,
    SearchResult, SumTable,
};
pub use sign::{evaluate_trits, SignVector, MAX_SIGNS};
pub use value::ExactValue;
