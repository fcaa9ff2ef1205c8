mod appendix;
mod collide;
mod couple;
mod exact;
mod golden;
mod metric;

pub use appendix::cmd_appendix;
pub use collide::cmd_collide;
pub use couple::cmd_couple;
pub use exact::{cmd_mix_exact, cmd_single_card};
pub use golden::cmd_golden;
pub use metric::cmd_metric;

use ocs_core::mc::Estimate;
use ocs_core::ShuffleParams;
use serde_json::{json, Value};

use crate::output::{Sink, Stamp, BUILD_ID};
use crate::{ExperimentConfig, LabError};

/// Config plus the sink a command writes to.
pub struct Ctx {
    pub cfg: ExperimentConfig,
    pub sink: Sink,
}

impl Ctx {
    pub fn new(experiment: &str, cfg: ExperimentConfig) -> Result<Self, LabError> {
        let stamp = Stamp { seed: cfg.seed(), config_hash: cfg.hash(experiment), build: BUILD_ID };
        let sink = Sink::new(experiment, cfg.out.as_deref(), stamp)?;
        Ok(Ctx { cfg, sink })
    }

    /// Flush output, then pass on the command's verdict.
    fn finish(self, verdict: Result<(), LabError>) -> Result<(), LabError> {
        self.sink.finish()?;
        verdict
    }
}

fn params_json(q: &ShuffleParams) -> Value {
    json!({ "n": q.n(), "m": q.m() })
}

fn estimate_json(e: &Estimate) -> Value {
    json!({ "trials": e.trials, "successes": e.successes, "p_hat": e.p_hat, "ci95": [e.ci95.0, e.ci95.1] })
}

/// Finite floats print as-is; JSON has no infinity.
fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}
