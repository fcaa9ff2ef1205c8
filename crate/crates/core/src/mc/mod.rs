//! Monte-Carlo estimators for the collision, spreading, targeting and
//! occupancy probabilities, the statistics around them, and exact checks of
//! the auxiliary probability inequalities.

mod appendix;
mod collide;
mod fit;
mod occupancy;
mod profile;
mod spread;
mod stats;
mod walker;

pub use appendix::{
    appendix_quasi_uniform_check, appendix_rw_bounds_check, binomial_log_tail, walk_abs_max_tail, walk_max_tail,
    QuasiUniformCounterexample, QuasiUniformReport, RwBoundKind, RwBoundsReport, RwViolation, RwGrid,
};
pub use collide::{
    estimate_full_collide, estimate_l1_collision, estimate_match_prob, estimate_sqrtn_collide, FullCollide, L1Variant,
    MatchProb, TripleCollide, l1_collision, sqrtn_close_start, sqrtn_collide, sqrtn_far_start, ORDER_IJK, ORDER_IKJ,
};
pub use fit::{fit_estimates, fit_scaling, FitError, ScalingFit};
pub use occupancy::{big_l, occupancy_alone_bottom, Occupancy, OccupancyReport};
pub use profile::ConstantProfile;
pub use spread::{estimate_targeting, spread_experiment, SpreadExperiment, Targeting};
pub use stats::{run_trials, wilson, wilson_coverage, Estimate, Experiment, Z95};
pub use walker::{Direction, Walker};

use alloc::string::String;

use crate::params::{ParamError, ShuffleParams};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum McError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("infeasible under profile {profile}: {hypothesis}")]
    Infeasible { profile: &'static str, hypothesis: String },
}

/// Smallest admissible distance of m/n from 0 and 1 for the estimators
/// whose guarantees need m/n bounded away from both ends.
pub const RATIO_EPS: f64 = 0.05;

/// Rejects m/n outside (eps, 1 − eps).
pub fn check_ratio(params: &ShuffleParams, eps: f64) -> Result<(), McError> {
    let r = params.m() as f64 / params.n() as f64;
    if r > eps && r < 1.0 - eps {
        Ok(())
    } else {
        Err(McError::Precondition(alloc::format!("m/n = {r:.4} not in ({eps}, {})", 1.0 - eps)))
    }
}
