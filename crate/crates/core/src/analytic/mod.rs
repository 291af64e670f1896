//! Numerical side: the cosine product `ρ_N`, the density `g`, and
//! finite-range checks of the bounds relating them.

mod checks;
mod counts;
mod density;
pub mod quadrature;
mod rho;

pub use checks::{
    bump, bump_transform, check_decay, check_exponential_bound, check_limit_ratio, check_sandwich,
    default_c_prime, expectation_identity, BoundCheckReport, DecayOptions, ExpectationIdentity,
    LimitRatioReport, RatioPoint, SandwichSample, C1_PLACEHOLDER, EXP_BOUND_SLACK,
};
pub use counts::{d_count, dist_to_int, s_count, sigma_minus};
pub use density::{
    density, interval_probability_by_samples, interval_probability_density, DensityEvaluator,
    DensitySample, IntervalProbability, Truncation,
};
pub use rho::{cos_pi, rho_limit, rho_limit_capped, rho_n, tail_bound, LimitKernel, RhoValue, RHO_TERM_CAP};
