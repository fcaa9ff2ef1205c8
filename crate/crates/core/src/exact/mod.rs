//! Exact chain evolution: the single-card position chain, the full deck for
//! n ≤ 8, distances to the uniform target, entropy and spectral estimates.

mod dist;
mod entropy;
mod kernel;
mod perm;
mod spectral;

pub use dist::{DistError, DistVector, Support};
pub use entropy::{entropy_report, EntropyReport};
pub use kernel::{t_single_mix, tv_profile, HorizonExhausted, SingleCardKernel};
pub use perm::{
    full_deck_dist, lehmer_rank, lehmer_unrank, mixing_time_exact_small, target_at, tv_to_target, ExactError,
    FullDeckEvolution, MixOptions, MixReport, MixRow, Target, FULL_DECK_CAP, FULL_DECK_DEFAULT_CAP,
};
pub use spectral::{dense_matrix, relaxation_dense, relaxation_estimate, relaxation_iterative, IterOptions, Relaxation, RelaxationError, RelaxationMethod, DENSE_CAP};

/// Default TV threshold for a mixing time.
pub const DEFAULT_DELTA: f64 = 0.25;
