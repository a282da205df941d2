//! Hitting and return times, the exact return decomposition of finite
//! systems, and empirical distribution functions of sampled systems.

mod empirical;
mod exact;
mod orbit;

pub use empirical::{
    direct_return_sample, empirical_distributions, sample_hitting_times, seeded_point, DirectReturnSample,
    EmpiricalLaws, HittingSample, ReturnMode, SamplingPlan, DEFAULT_CAP_FACTOR, REJECTION_BUDGET,
};
pub use exact::{decompose_exact, verify_star_identities, ReturnDecomposition, StarReport};
pub use orbit::{hitting_time, hitting_time_extended, Hit};
