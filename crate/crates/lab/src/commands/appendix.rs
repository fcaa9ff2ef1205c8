use ocs_core::mc::{appendix_quasi_uniform_check, appendix_rw_bounds_check, QuasiUniformCounterexample, RwGrid};
use serde_json::{json, Value};

use super::Ctx;
use crate::{ExperimentConfig, LabError};

pub const DEFAULT_CASES: u64 = 100_000;

fn counterexample_json(c: &QuasiUniformCounterexample) -> Value {
    json!({
        "statement": c.statement,
        "mu": c.mu,
        "nu": c.nu,
        "event": c.event,
        "constants": c.constants,
        "lhs": c.lhs,
        "rhs": c.rhs,
    })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn cmd_appendix(cfg: ExperimentConfig) -> Result<(), LabError> {
    let mut ctx = Ctx::new("appendix", cfg)?;
    let cases = ctx.cfg.trials.unwrap_or(DEFAULT_CASES);
    let grid = RwGrid { n_max: ctx.cfg.nmax.unwrap_or(RwGrid::default().n_max), ..RwGrid::default() };

    let qu = appendix_quasi_uniform_check(cases, ctx.cfg.seed());
    ctx.sink.say(format!(
        "quasi-uniform conditioning: {} ({} cases, reduction {} cases)",
        pass(qu.conditioning_pass()),
        qu.conditioning_cases,
        qu.reduction_cases
    ));
    ctx.sink.say(format!(
        "quasi-uniform TV bound: {} ({} cases; corrected (1-eps-delta)(a-b) form failed {} times)",
        pass(qu.tv_bound_pass()),
        qu.tv_bound_cases,
        qu.tv_weak_failures
    ));
    let examples = [&qu.conditioning_counterexample, &qu.reduction_counterexample, &qu.tv_bound_counterexample];
    for c in examples.iter().copied().flatten() {
        ctx.sink.say(format!(
            "  counterexample ({}): mu = {:?}, nu = {:?}, event = {:?}, constants = {:?}, lhs {} vs rhs {}",
            c.statement, c.mu, c.nu, c.event, c.constants, c.lhs, c.rhs
        ));
    }

    let rw = appendix_rw_bounds_check(&grid);
    ctx.sink.say(format!(
        "random-walk bounds: {} (inverse Hoeffding {} cases, Hoeffding {} cases, walk maximum {} cases; worst upper ratio {:.4})",
        pass(rw.pass()),
        rw.inverse_hoeffding_cases,
        rw.hoeffding_cases,
        rw.walk_max_cases,
        rw.worst_upper_ratio
    ));
    for v in rw.violations.iter().take(10) {
        ctx.sink.say(format!("  {:?} n={} k={} p={}: {} > {}", v.kind, v.n, v.k, v.p, v.lhs, v.rhs));
    }

    let qu_ok = qu.conditioning_pass() && qu.tv_bound_pass() && qu.tv_weak_failures == 0;
    ctx.sink.record(json!({
        "quasi_uniform": {
            "pass": qu_ok,
            "conditioning_pass": qu.conditioning_pass(),
            "tv_bound_pass": qu.tv_bound_pass(),
            "conditioning_cases": qu.conditioning_cases,
            "reduction_cases": qu.reduction_cases,
            "tv_bound_cases": qu.tv_bound_cases,
            "tv_weak_failures": qu.tv_weak_failures,
            "counterexamples": examples.iter().copied().flatten().map(counterexample_json).collect::<Vec<_>>(),
        },
        "random_walk": {
            "pass": rw.pass(),
            "n_max": grid.n_max,
            "inverse_hoeffding_cases": rw.inverse_hoeffding_cases,
            "hoeffding_cases": rw.hoeffding_cases,
            "walk_max_cases": rw.walk_max_cases,
            "worst_upper_ratio": rw.worst_upper_ratio,
            "violations": rw.violations.len(),
        },
    }))?;
    let verdict = match (qu_ok, rw.pass()) {
        (true, true) => Ok(()),
        _ => Err(LabError::Violation(format!("quasi-uniform {}, random-walk {}", pass(qu_ok), pass(rw.pass())))),
    };
    ctx.finish(verdict)
}
