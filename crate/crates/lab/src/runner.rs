use std::ops::Range;
use std::time::{Duration, Instant};

use ocs_core::mc::{run_trials, Estimate, Experiment};
use serde::Serialize;

/// Trials `range` split into `workers` contiguous shards. Each trial draws
/// from its own keyed stream, so the pooled count does not depend on the
/// split.
pub fn run_sharded<E: Experiment + ?Sized>(exp: &E, seed: u64, range: Range<u64>, workers: usize) -> Estimate {
    let len = range.end - range.start;
    let workers = (workers.max(1) as u64).min(len.max(1));
    if workers == 1 {
        return run_trials(exp, seed, range);
    }
    let chunk = len.div_ceil(workers);
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = range.start + w * chunk;
                let hi = (lo + chunk).min(range.end);
                s.spawn(move || run_trials(exp, seed, lo..hi.max(lo)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).fold(Estimate::empty(), Estimate::merge)
    })
}

/// When a budgeted estimate stops.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Budget {
    pub max_trials: u64,
    /// Trials per block; stopping rules are checked between blocks only, so
    /// the result is a function of the block count.
    pub block: u64,
    pub target_half_width: Option<f64>,
    pub max_successes: Option<u64>,
    pub wall_clock: Option<Duration>,
}

impl Budget {
    pub fn fixed(trials: u64) -> Self {
        Budget { max_trials: trials, block: trials.max(1), ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stop {
    Trials,
    HalfWidth,
    Successes,
    /// Only this one depends on machine speed.
    WallClock,
}

pub fn run_budgeted<E: Experiment + ?Sized>(exp: &E, seed: u64, budget: &Budget, workers: usize) -> (Estimate, Stop) {
    let start = Instant::now();
    let block = budget.block.max(1);
    let mut est = Estimate::empty();
    loop {
        if est.trials >= budget.max_trials {
            return (est, Stop::Trials);
        }
        if est.trials > 0 {
            if budget.target_half_width.is_some_and(|h| est.successes > 0 && est.half_width() <= h) {
                return (est, Stop::HalfWidth);
            }
            if budget.max_successes.is_some_and(|s| est.successes >= s) {
                return (est, Stop::Successes);
            }
            if budget.wall_clock.is_some_and(|d| start.elapsed() >= d) {
                return (est, Stop::WallClock);
            }
        }
        let hi = (est.trials + block).min(budget.max_trials);
        est = est.merge(run_sharded(exp, seed, est.trials..hi, workers));
    }
}
