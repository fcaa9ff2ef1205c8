use ocs_core::metric::{golden_gap_report, golden_lmax_check, GoldenGapReport};
use serde::Serialize;
use serde_json::json;

use super::Ctx;
use crate::{ExperimentConfig, LabError};

pub const DEFAULT_NMAX: usize = 4096;
/// Smallest deck on the ℓ_max grid.
pub const LMAX_GRID_START: usize = 8;

#[derive(Serialize)]
struct GapRow {
    big_n: usize,
    distinct_gaps: usize,
    exponents: String,
    max_covering_distance: f64,
    covering_bound: f64,
    fibonacci_index: u32,
}

#[derive(Serialize)]
struct LmaxRow {
    n: usize,
    m: usize,
    l_max: f64,
    lower: f64,
    bound: f64,
    pass: bool,
}

/// Powers of two from the grid start up to nmax, plus nmax itself.
pub fn lmax_grid(nmax: usize) -> Vec<usize> {
    let mut g: Vec<usize> = std::iter::successors(Some(LMAX_GRID_START), |&n| n.checked_mul(2)).take_while(|&n| n <= nmax).collect();
    if g.last() != Some(&nmax) && nmax >= LMAX_GRID_START {
        g.push(nmax);
    }
    g
}

pub fn cmd_golden(cfg: ExperimentConfig) -> Result<(), LabError> {
    let mut ctx = Ctx::new("golden", cfg)?;
    let nmax = ctx.cfg.nmax.unwrap_or(DEFAULT_NMAX);
    if nmax < 1 {
        return Err(LabError::Invalid("--nmax must be at least 1".into()));
    }
    let mut gap_rows = Vec::with_capacity(nmax);
    let mut gap_failures = Vec::new();
    for big_n in 1..=nmax {
        let r: GoldenGapReport = match golden_gap_report(big_n) {
            Ok(r) => r,
            Err(v) => {
                gap_failures.push((big_n, v.reason.clone()));
                v.report
            }
        };
        gap_rows.push(GapRow {
            big_n,
            distinct_gaps: r.gaps.len(),
            exponents: r.exponents.iter().map(i32::to_string).collect::<Vec<_>>().join(" "),
            max_covering_distance: r.max_covering_distance,
            covering_bound: r.covering_bound,
            fibonacci_index: r.fibonacci_index,
        });
    }
    let mut lmax_rows = Vec::new();
    for n in lmax_grid(nmax) {
        let c = golden_lmax_check(n)?;
        lmax_rows.push(LmaxRow { n, m: c.m, l_max: c.l_max, lower: c.lower, bound: c.bound, pass: c.pass });
    }
    let lmax_fail: Vec<usize> = lmax_rows.iter().filter(|r| !r.pass).map(|r| r.n).collect();

    ctx.sink.say(format!(
        "three-distance and covering bound: {}/{nmax} values of N pass",
        nmax - gap_failures.len()
    ));
    for (n, why) in gap_failures.iter().take(10) {
        ctx.sink.say(format!("  N = {n}: {why}"));
    }
    ctx.sink.say(format!("golden l_max <= 6 n^(3/4): {}/{} grid points pass", lmax_rows.len() - lmax_fail.len(), lmax_rows.len()));
    for r in &lmax_rows {
        ctx.sink.say(format!("  n = {:>6}  m = {:>6}  l_max = {:>10.3}  bound = {:>10.3}  {}", r.n, r.m, r.l_max, r.bound, if r.pass { "pass" } else { "FAIL" }));
    }
    ctx.sink.record(json!({
        "nmax": nmax,
        "three_distance": { "checked": nmax, "failures": gap_failures.iter().map(|f| json!({ "big_n": f.0, "reason": f.1 })).collect::<Vec<_>>() },
        "lmax": { "grid": lmax_rows.iter().map(|r| r.n).collect::<Vec<_>>(), "failures": lmax_fail },
    }))?;
    ctx.sink.table("golden_gaps", &gap_rows)?;
    ctx.sink.table("golden_lmax", &lmax_rows)?;
    let verdict = if gap_failures.is_empty() && lmax_fail.is_empty() {
        Ok(())
    } else {
        Err(LabError::Violation(format!("{} three-distance and {} l_max failures", gap_failures.len(), lmax_fail.len())))
    };
    ctx.finish(verdict)
}
