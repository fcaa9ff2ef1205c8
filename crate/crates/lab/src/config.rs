use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::LabError;
use ocs_core::ShuffleParams;

/// Every knob of every subcommand. Loaded from a JSON file (`--config`)
/// and overridden field by field by command-line flags.
///
/// JSON schema: an object whose keys are the long flag names with dashes
/// replaced by underscores (`allow_large`, `sweep_n`, …); unknown keys are
/// rejected. `alpha` is a string (`"0.5"`, `"golden"`); `sweep_n`,
/// `sweep_ell` and `cards` are arrays.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Deck size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Cut position, 2 ≤ m ≤ n−1.
    #[arg(long)]
    pub m: Option<usize>,
    /// m = ⌊αn⌋; a number or "golden".
    #[arg(long)]
    pub alpha: Option<String>,
    /// Norm scale ℓ
    #[arg(long)]
    pub ell: Option<f64>,
    /// Constant profile: paper or desk.
    #[arg(long)]
    pub profile: Option<String>,
    /// Trial count (maximum, when a budget is also set).
    #[arg(long)]
    pub trials: Option<u64>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Mixing threshold for TV.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Lift the default full-deck cap from 7 to 8 cards.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub allow_large: Option<bool>,
    /// collide: l1 | match | sqrtn | full | targeting | spread | occupancy.
    #[arg(long)]
    pub kind: Option<String>,
    /// l1 layout: adjacent | gap.
    #[arg(long)]
    pub variant: Option<String>,
    /// First card of the match experiment
    #[arg(long)]
    pub i: Option<usize>,
    /// Second card of the match experiment
    #[arg(long)]
    pub j: Option<usize>,
    /// Landing radius is ℓ/divisor (spread).
    #[arg(long)]
    pub divisor: Option<f64>,
    /// forward | inverse (spread).
    #[arg(long)]
    pub direction: Option<String>,
    /// Comma-separated deck sizes to sweep.
    #[arg(long, value_delimiter = ',')]
    pub sweep_n: Option<Vec<usize>>,
    /// Comma-separated ℓ values to sweep.
    #[arg(long, value_delimiter = ',')]
    pub sweep_ell: Option<Vec<f64>>,
    /// Step horizon (single-card search cap, occupancy, couple).
    #[arg(long)]
    pub horizon: Option<u64>,
    /// Starting position of the single card.
    #[arg(long)]
    pub start: Option<usize>,
    /// Largest N (golden) or binomial n (appendix).
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Three positions, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub cards: Option<Vec<usize>>,
    /// Stop once the 95% interval half-width is at most this.
    #[arg(long)]
    pub target_half_width: Option<f64>,
    /// Wall-clock cap per estimate, in seconds.
    #[arg(long)]
    pub budget_secs: Option<f64>,
    /// Also compute the relaxation time (single-card).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub relaxation: Option<bool>,
    /// Write the single-card kernel as a MatrixMarket file.
    #[arg(long)]
    pub export_kernel: Option<PathBuf>,
    /// couple: replay the scripted five-step coupling.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub replay_worked_example: Option<bool>,
    /// Output directory; stdout only when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for Monte-Carlo trials.
    #[arg(long)]
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| LabError::Invalid(format!("config {}: {e}", path.display())))
    }

    /// Fields set in `self` win over `base`.
    pub fn over(self, base: ExperimentConfig) -> ExperimentConfig {
        let mut merged = to_map(&base);
        for (k, v) in to_map(&self) {
            if !v.is_null() {
                merged.insert(k, v);
            }
        }
        serde_json::from_value(Value::Object(merged)).expect("merging two valid configs")
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn workers(&self) -> usize {
        self.workers.unwrap_or(1).max(1)
    }

    /// First 16 hex digits of SHA-256 over the canonical JSON of every field
    /// that can change results (so not `out` or `workers`).
    pub fn hash(&self, experiment: &str) -> String {
        let mut map = to_map(self);
        map.remove("out");
        map.remove("workers");
        map.retain(|_, v| !v.is_null());
        map.insert("experiment".into(), Value::String(experiment.into()));
        let text = serde_json::to_string(&Value::Object(map)).expect("config serializes");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn need_n(&self) -> Result<usize, LabError> {
        self.n.ok_or_else(|| LabError::Invalid("--n is required".into()))
    }

    /// (n, m) from `--m` or `--alpha`.
    pub fn params(&self) -> Result<ShuffleParams, LabError> {
        self.params_for(self.need_n()?)
    }

    /// Same cut rule at another deck size (sweeps need `--alpha`).
    pub fn params_for(&self, n: usize) -> Result<ShuffleParams, LabError> {
        match (self.m, self.alpha.as_deref()) {
            (Some(_), Some(_)) => Err(LabError::Invalid("give --m or --alpha, not both".into())),
            (Some(m), None) => Ok(ShuffleParams::new(n, m)?),
            (None, Some(a)) => Ok(ShuffleParams::from_alpha(n, parse_alpha(a)?)?),
            (None, None) => Err(LabError::Invalid("--m or --alpha is required".into())),
        }
    }
}

pub fn parse_alpha(a: &str) -> Result<f64, LabError> {
    match a.trim().to_ascii_lowercase().as_str() {
        "golden" | "phi" => Ok(ocs_core::PHI),
        s => s
            .trim_end_matches(['…', '.'])
            .parse::<f64>()
            .ok()
            .filter(|x| *x > 0.0 && *x < 1.0)
            .ok_or_else(|| LabError::Invalid(format!("--alpha must be in (0, 1) or 'golden', got {a}"))),
    }
}

fn to_map(c: &ExperimentConfig) -> Map<String, Value> {
    match serde_json::to_value(c).expect("config serializes") {
        Value::Object(m) => m,
        _ => unreachable!(),
    }
}
