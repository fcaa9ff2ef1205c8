use std::time::Duration;

use ocs_core::mc::{
    fit_estimates, l1_collision, sqrtn_close_start, sqrtn_collide, ConstantProfile, Direction, Estimate, Experiment,
    FullCollide, L1Variant, MatchProb, Occupancy, SpreadExperiment, Targeting,
};
use ocs_core::ShuffleParams;
use serde::Serialize;
use serde_json::{json, Value};

use super::{estimate_json, params_json, Ctx};
use crate::runner::{run_budgeted, Budget, Stop};
use crate::{ExperimentConfig, LabError};

pub const DEFAULT_TRIALS: u64 = 10_000;
/// Trials per block of a budgeted run.
pub const BLOCK: u64 = 10_000;
/// Trials spent on each zero-probability control.
pub const CONTROL_TRIALS: u64 = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    L1,
    Match,
    Sqrtn,
    Full,
    Targeting,
    Spread,
    Occupancy,
}

impl Kind {
    fn parse(s: &str) -> Result<Self, LabError> {
        Ok(match s {
            "l1" => Kind::L1,
            "match" => Kind::Match,
            "sqrtn" => Kind::Sqrtn,
            "full" => Kind::Full,
            "targeting" => Kind::Targeting,
            "spread" => Kind::Spread,
            "occupancy" => Kind::Occupancy,
            _ => {
                return Err(LabError::Invalid(format!(
                    "--kind must be one of l1, match, sqrtn, full, targeting, spread, occupancy; got {s}"
                )))
            }
        })
    }

    fn name(self) -> &'static str {
        match self {
            Kind::L1 => "l1",
            Kind::Match => "match",
            Kind::Sqrtn => "sqrtn",
            Kind::Full => "full",
            Kind::Targeting => "targeting",
            Kind::Spread => "spread",
            Kind::Occupancy => "occupancy",
        }
    }
}

/// One sweep point, fully built (so every hypothesis is checked before
/// any trial runs).
struct Point {
    x: f64,
    params: ShuffleParams,
    ell: Option<f64>,
    exp: Box<dyn Experiment>,
    control: Option<Box<dyn Experiment>>,
    extra: Value,
}

#[derive(Serialize)]
struct SweepRow {
    x: f64,
    n: usize,
    m: usize,
    trials: u64,
    successes: u64,
    p_hat: f64,
    ci_lo: f64,
    ci_hi: f64,
    stop: Stop,
}

fn profile(cfg: &ExperimentConfig) -> Result<ConstantProfile, LabError> {
    let name = cfg.profile.as_deref().unwrap_or("desk");
    ConstantProfile::by_name(name).ok_or_else(|| LabError::Invalid(format!("--profile must be paper or desk, got {name}")))
}

fn cards(cfg: &ExperimentConfig, default: [usize; 3]) -> Result<[usize; 3], LabError> {
    match &cfg.cards {
        None => Ok(default),
        Some(c) => <[usize; 3]>::try_from(c.as_slice())
            .map_err(|_| LabError::Invalid(format!("--cards needs exactly three positions, got {}", c.len()))),
    }
}

fn build(kind: Kind, cfg: &ExperimentConfig, q: ShuffleParams, ell: Option<f64>, x: f64) -> Result<Point, LabError> {
    let prof = profile(cfg)?;
    let need_ell = || ell.ok_or_else(|| LabError::Invalid(format!("--ell is required for --kind {}", kind.name())));
    let n = q.n();
    let (exp, control, extra): (Box<dyn Experiment>, Option<Box<dyn Experiment>>, Value) = match kind {
        Kind::L1 => {
            let v = match cfg.variant.as_deref().unwrap_or("adjacent") {
                "adjacent" => L1Variant::Adjacent,
                "gap" => L1Variant::Gap,
                s => return Err(LabError::Invalid(format!("--variant must be adjacent or gap, got {s}"))),
            };
            let e = l1_collision(&q, v)?;
            (Box::new(e), Some(Box::new(e.control())), json!({ "variant": format!("{v:?}").to_lowercase(), "start": e.start }))
        }
        Kind::Match => {
            let low = (n as f64 - q.sqrt_n()).floor() as usize + 1;
            let i = cfg.i.unwrap_or(low);
            let j = cfg.j.unwrap_or(i + 1);
            let e = MatchProb::new(&q, i, j)?;
            (Box::new(e), Some(Box::new(e.control())), json!({ "i": i, "j": j }))
        }
        Kind::Sqrtn => {
            let start = cards(cfg, sqrtn_close_start(&q))?;
            let e = sqrtn_collide(&q, start)?;
            (Box::new(e), Some(Box::new(e.control())), json!({ "start": start }))
        }
        Kind::Full => {
            let c = cards(cfg, [1, 2, 3])?;
            let e = FullCollide::new(&q, need_ell()?, c, &prof)?;
            let extra = json!({ "cards": c, "t1": e.t1, "t2": e.t2, "window": [e.inner.big_t, e.inner.t_end] });
            (Box::new(e), Some(Box::new(e.control())), extra)
        }
        Kind::Targeting => {
            let e = Targeting::new(&q, need_ell()?, &prof)?;
            (Box::new(e), Some(Box::new(e.control())), json!({ "cards": e.cards, "targets": e.targets, "t": e.t }))
        }
        Kind::Spread => {
            let dir = match cfg.direction.as_deref().unwrap_or("forward") {
                "forward" => Direction::Forward,
                "inverse" => Direction::Inverse,
                s => return Err(LabError::Invalid(format!("--direction must be forward or inverse, got {s}"))),
            };
            let divisor = cfg.divisor.unwrap_or(prof.stage1_divisor);
            let e = SpreadExperiment::stage_one(&q, need_ell()?, divisor, dir)?;
            let extra = json!({ "direction": format!("{dir:?}").to_lowercase(), "divisor": divisor, "targets": e.targets, "t": e.t });
            (Box::new(e), None, extra)
        }
        Kind::Occupancy => {
            let c = cards(cfg, [n, 1, 2])?;
            let e = match cfg.horizon {
                Some(h) => Occupancy::each_card(&q, c, h)?,
                None => Occupancy::standard(&q, c)?,
            };
            let extra = json!({ "cards": c, "horizon": e.horizon, "threshold": e.threshold, "all_three": e.all_three, "lower_bound": e.lower_bound() });
            (Box::new(e), None, extra)
        }
    };
    Ok(Point { x, params: q, ell, exp, control, extra })
}

pub fn cmd_collide(cfg: ExperimentConfig) -> Result<(), LabError> {
    let kind = Kind::parse(cfg.kind.as_deref().ok_or_else(|| LabError::Invalid("--kind is required".into()))?)?;
    let mut ctx = Ctx::new("collide", cfg)?;
    let cfg = &ctx.cfg;
    if cfg.sweep_n.is_some() && cfg.sweep_ell.is_some() {
        return Err(LabError::Invalid("sweep either n or ell, not both".into()));
    }
    let mut points = Vec::new();
    if let Some(ns) = &cfg.sweep_n {
        for &n in ns {
            points.push(build(kind, cfg, cfg.params_for(n)?, cfg.ell, n as f64)?);
        }
    } else if let Some(ells) = &cfg.sweep_ell {
        let q = cfg.params()?;
        for &ell in ells {
            points.push(build(kind, cfg, q, Some(ell), ell)?);
        }
    } else {
        let q = cfg.params()?;
        points.push(build(kind, cfg, q, cfg.ell, q.n() as f64)?);
    }

    let trials = cfg.trials.unwrap_or(DEFAULT_TRIALS);
    let budget = Budget {
        max_trials: trials,
        block: BLOCK,
        target_half_width: cfg.target_half_width,
        max_successes: None,
        wall_clock: cfg.budget_secs.map(Duration::from_secs_f64),
    };
    let (seed, workers) = (cfg.seed(), cfg.workers());
    let prof_name = profile(cfg)?.name;
    let mut rows = Vec::new();
    let mut fit_input: Vec<(f64, Estimate)> = Vec::new();
    let mut control_hits = 0;
    for p in &points {
        let (est, stop) = run_budgeted(p.exp.as_ref(), seed, &budget, workers);
        let control = p
            .control
            .as_ref()
            .map(|c| run_budgeted(c.as_ref(), seed, &Budget::fixed(CONTROL_TRIALS.min(trials)), workers).0);
        control_hits += control.map_or(0, |c| c.successes);
        ctx.sink.say(format!(
            "{} n={} m={}{}: p_hat = {:.6e} [{:.3e}, {:.3e}] ({}/{}, stop={})",
            p.exp.name(),
            p.params.n(),
            p.params.m(),
            p.ell.map_or(String::new(), |l| format!(" ell={l}")),
            est.p_hat,
            est.ci95.0,
            est.ci95.1,
            est.successes,
            est.trials,
            serde_json::to_value(stop)?.as_str().unwrap_or_default(),
        ));
        ctx.sink.record(json!({
            "kind": kind.name(),
            "name": p.exp.name(),
            "params": params_json(&p.params),
            "x": p.x,
            "ell": p.ell,
            "profile": prof_name,
            "estimate": estimate_json(&est),
            "stop": stop,
            "control": control.as_ref().map(estimate_json),
            "setup": p.extra,
        }))?;
        rows.push(SweepRow {
            x: p.x,
            n: p.params.n(),
            m: p.params.m(),
            trials: est.trials,
            successes: est.successes,
            p_hat: est.p_hat,
            ci_lo: est.ci95.0,
            ci_hi: est.ci95.1,
            stop,
        });
        fit_input.push((p.x, est));
    }
    if points.len() > 1 {
        ctx.sink.table(&format!("collide_{}_sweep", kind.name()), &rows)?;
        match fit_estimates(&fit_input) {
            Ok(f) => {
                ctx.sink.say(format!(
                    "exponent = {:.4} +/- {:.4} (weighted log-log fit on {} points, {} excluded)",
                    f.exponent,
                    f.stderr,
                    f.points.len(),
                    f.excluded.len()
                ));
                ctx.sink.record(json!({
                    "kind": kind.name(),
                    "fit": { "exponent": f.exponent, "stderr": f.stderr, "intercept": f.intercept, "points": f.points.len(), "excluded": f.excluded },
                }))?;
            }
            Err(e) => ctx.sink.say(format!("exponent: no fit ({e})")),
        }
    }
    let verdict = if control_hits > 0 {
        Err(LabError::Violation(format!("a control with empty window succeeded {control_hits} times")))
    } else {
        Ok(())
    };
    ctx.finish(verdict)
}
