use ocs_core::metric::{
    enumerate_n_ell, gamma, l_max_witness, n_ell_lower_bound, norm, select_time_t1, select_time_t2, spread_triple,
    SpreadMethod, SpreadMode,
};
use serde::Serialize;
use serde_json::json;

use super::{params_json, Ctx};
use crate::{ExperimentConfig, LabError};

#[derive(Serialize)]
struct WeightRow {
    x: usize,
    weight: i64,
    norm: f64,
    a: i64,
    b: i64,
}

#[derive(Serialize)]
struct GammaRow {
    ell: f64,
    gamma: usize,
    n_ell: usize,
    n_ell_lower_bound: f64,
}

/// Points of the γ / N_ℓ curve between √n and ℓ_max.
const CURVE_POINTS: usize = 32;

pub fn cmd_metric(cfg: ExperimentConfig) -> Result<(), LabError> {
    let mut ctx = Ctx::new("metric", cfg)?;
    let q = ctx.cfg.params()?;
    let (lmax, witness) = l_max_witness(&q);
    let nw = norm(&q, witness);
    ctx.sink.say(format!("n = {}, m = {}, modulus = {}, parity = {:?}", q.n(), q.m(), q.modulus(), q.parity_class()));
    ctx.sink.say(format!("l_max = {lmax}"));
    ctx.sink.say(format!("l_max witness: weight {witness} = {} + {}*m", nw.a, nw.b));
    let mut rec = json!({
        "params": params_json(&q),
        "modulus": q.modulus(),
        "l_max": lmax,
        "l_max_witness": { "omega": witness, "a": nw.a, "b": nw.b },
    });

    if let Some(ell) = ctx.cfg.ell {
        if !(ell > 0.0 && ell.is_finite()) {
            return Err(LabError::Invalid(format!("--ell must be positive, got {ell}")));
        }
        let g = gamma(&q, ell);
        let n_ell = enumerate_n_ell(&q, ell).len();
        let lower = n_ell_lower_bound(&q, ell);
        ctx.sink.say(format!("gamma = {g}"));
        ctx.sink.say(format!("|N_ell| = {n_ell} (lower bound {lower:.3})"));
        let s = (ell * ell).ceil() as u64;
        let t1 = select_time_t1(&q, s).map_err(|e| LabError::Violation(e.to_string()))?;
        let t2 = select_time_t2(&q, s).map_err(|e| LabError::Violation(e.to_string()))?;
        ctx.sink.say(format!("T1 = {t1}, T2 = {t2} (from s = {s})"));
        let spread = match spread_triple(&q, ell, SpreadMode::Relaxed) {
            Ok(t) => {
                let method = match t.method {
                    SpreadMethod::Halving { depth } => format!("halving depth {depth}"),
                    SpreadMethod::Exhaustive => "exhaustive".into(),
                };
                ctx.sink.say(format!("spread triple = {:?} ({method})", t.positions));
                json!({ "positions": t.positions, "method": method })
            }
            Err(e) => {
                ctx.sink.say(format!("spread triple: none ({e})"));
                json!({ "error": e.to_string() })
            }
        };
        let obj = rec.as_object_mut().unwrap();
        obj.insert("ell".into(), json!(ell));
        obj.insert("gamma".into(), json!(g));
        obj.insert("n_ell".into(), json!(n_ell));
        obj.insert("n_ell_lower_bound".into(), json!(lower));
        obj.insert("t1".into(), json!(t1));
        obj.insert("t2".into(), json!(t2));
        obj.insert("spread_triple".into(), spread);
    }
    ctx.sink.record(rec)?;

    if ctx.sink.dir().is_some() {
        let rows = (1..=q.n()).map(|x| {
            let w = q.weight(x);
            let d = norm(&q, w);
            WeightRow { x, weight: w, norm: d.value, a: d.a, b: d.b }
        });
        ctx.sink.table("metric_weights", rows)?;
        let lo = q.sqrt_n();
        let curve = (0..CURVE_POINTS).map(|k| {
            let ell = lo * (lmax / lo).max(1.0).powf(k as f64 / (CURVE_POINTS - 1) as f64);
            GammaRow { ell, gamma: gamma(&q, ell), n_ell: enumerate_n_ell(&q, ell).len(), n_ell_lower_bound: n_ell_lower_bound(&q, ell) }
        });
        ctx.sink.table("metric_gamma", curve)?;
    }
    ctx.finish(Ok(()))
}
