use std::io::Write;

use ocs_core::exact::{
    mixing_time_exact_small, relaxation_estimate, DistVector, MixOptions, SingleCardKernel, Support, Target,
    DEFAULT_DELTA,
};
use ocs_core::{KahanSum, ParityClass};
use serde::Serialize;
use serde_json::json;

use super::{finite, params_json, Ctx};
use crate::{ExperimentConfig, LabError};

#[derive(Serialize)]
struct SingleRow {
    t: usize,
    tv: f64,
    ent: f64,
}

#[derive(Serialize)]
struct MixCsvRow {
    t: usize,
    target: &'static str,
    tv: f64,
    tv_sn: f64,
    ent: f64,
    ent_given_sign: f64,
    pinsker_ok: bool,
}

/// Most rows a single-card profile keeps; longer runs are thinned evenly.
const PROFILE_ROWS: usize = 4096;

fn delta(cfg: &ExperimentConfig) -> Result<f64, LabError> {
    let d = cfg.delta.unwrap_or(DEFAULT_DELTA);
    if d > 0.0 && d < 1.0 {
        Ok(d)
    } else {
        Err(LabError::Invalid(format!("--delta must be in (0, 1), got {d}")))
    }
}

fn tv_and_entropy(p: &[f64]) -> (f64, f64) {
    let n = p.len() as f64;
    let u = 1.0 / n;
    let tv = 0.5 * p.iter().map(|x| (x - u).abs()).collect::<KahanSum>().total();
    let ent = p.iter().filter(|&&x| x > 0.0).map(|&x| x * (n * x).ln()).collect::<KahanSum>().total();
    (tv, ent)
}

pub fn cmd_single_card(cfg: ExperimentConfig) -> Result<(), LabError> {
    let mut ctx = Ctx::new("single_card", cfg)?;
    let q = ctx.cfg.params()?;
    let delta = delta(&ctx.cfg)?;
    let n = q.n();
    let start = ctx.cfg.start.unwrap_or(1);
    q.check_position(start)?;
    let max_t = ctx.cfg.horizon.map(|h| h as usize).unwrap_or(64 * n * n);
    let kernel = SingleCardKernel::new(&q);

    // evolve once, keeping a thinned profile; the stride doubles whenever
    // the buffer fills, so memory stays bounded without knowing t_mix
    let mut p = DistVector::point_mass(Support::Positions(n), start - 1).into_probs();
    let mut next = vec![0.0; n];
    let mut rows = Vec::new();
    let mut stride = 1usize;
    let mut t = 0usize;
    let mut t_mix = None;
    loop {
        let (tv, ent) = tv_and_entropy(&p);
        if t % stride == 0 {
            rows.push(SingleRow { t, tv, ent });
            if rows.len() >= 2 * PROFILE_ROWS {
                stride *= 2;
                rows.retain(|r| r.t % stride == 0);
            }
        }
        if tv <= delta {
            if t % stride != 0 {
                rows.push(SingleRow { t, tv, ent });
            }
            t_mix = Some(t);
            break;
        }
        if t >= max_t {
            break;
        }
        kernel.push(&p, &mut next);
        std::mem::swap(&mut p, &mut next);
        t += 1;
    }

    let relaxation = if ctx.cfg.relaxation.unwrap_or(false) {
        let r = relaxation_estimate(&kernel).map_err(|e| LabError::Violation(e.to_string()))?;
        ctx.sink.say(format!("relaxation time = {:.6} (|lambda_2| = {:.12}, {:?})", r.time, r.lambda2, r.method));
        json!({ "time": r.time, "lambda2": r.lambda2, "method": format!("{:?}", r.method).to_lowercase(), "residual": r.residual })
    } else {
        serde_json::Value::Null
    };

    if let Some(path) = ctx.cfg.export_kernel.clone() {
        let mut f = std::io::BufWriter::new(std::fs::File::create(&path)?);
        let trip = kernel.triplets();
        writeln!(f, "%%MatrixMarket matrix coordinate real general")?;
        writeln!(f, "% single-card kernel n={} m={}", n, q.m())?;
        writeln!(f, "{n} {n} {}", trip.len())?;
        for (x, y, w) in trip {
            writeln!(f, "{x} {y} {w}")?;
        }
        f.flush()?;
        ctx.sink.say(format!("kernel written to {}", path.display()));
    }

    ctx.sink.record(json!({
        "params": params_json(&q),
        "start": start,
        "delta": delta,
        "t_mix": t_mix,
        "horizon": max_t,
        "relaxation": relaxation,
    }))?;
    ctx.sink.table("single_card_profile", &rows)?;
    let verdict = match t_mix {
        Some(t) => {
            ctx.sink.say(format!("t_mix({delta}) = {t}"));
            Ok(())
        }
        None => Err(LabError::Violation(format!(
            "TV still {:.6} > {delta} after {max_t} steps",
            rows.last().map_or(f64::NAN, |r| r.tv)
        ))),
    };
    ctx.finish(verdict)
}

fn target_name(t: Target) -> &'static str {
    match t {
        Target::UniformSn => "S_n",
        Target::UniformEven => "even",
        Target::UniformOdd => "odd",
    }
}

pub fn cmd_mix_exact(cfg: ExperimentConfig) -> Result<(), LabError> {
    let mut ctx = Ctx::new("mix_exact", cfg)?;
    let q = ctx.cfg.params()?;
    let delta = delta(&ctx.cfg)?;
    let opt = MixOptions { allow_large: ctx.cfg.allow_large.unwrap_or(false), max_t: ctx.cfg.horizon.map_or(10_000, |h| h as usize) };
    let report = mixing_time_exact_small(&q, delta, &opt)?;
    let pinsker_ok = report.profile.iter().all(|r| r.entropy.pinsker_ok);
    let min_tv_sn = report.profile.iter().map(|r| r.tv_sn).fold(f64::INFINITY, f64::min);
    ctx.sink.say(format!("parity class = {:?}", q.parity_class()));
    ctx.sink.say(format!("t_mix({delta}) = {} (TV to coset target {:.6})", report.t_mix, report.profile.last().unwrap().tv));
    if q.parity_class() == ParityClass::Periodic {
        ctx.sink.say(format!("min TV to uniform on S_n over the profile = {min_tv_sn:.6}"));
    }
    ctx.sink.say(format!("pinsker holds at every t: {}", if pinsker_ok { "yes" } else { "no" }));
    let last = report.profile.last().unwrap();
    ctx.sink.record(json!({
        "params": params_json(&q),
        "parity_class": format!("{:?}", q.parity_class()).to_lowercase(),
        "delta": delta,
        "t_mix": report.t_mix,
        "tv": last.tv,
        "tv_sn": last.tv_sn,
        "ent": finite(last.entropy.ent),
        "min_tv_sn": min_tv_sn,
        "pinsker_ok": pinsker_ok,
    }))?;
    let rows = report.profile.iter().map(|r| MixCsvRow {
        t: r.t,
        target: target_name(r.target),
        tv: r.tv,
        tv_sn: r.tv_sn,
        ent: r.entropy.ent,
        ent_given_sign: r.entropy.ent_given_sign,
        pinsker_ok: r.entropy.pinsker_ok,
    });
    ctx.sink.table("mix_exact_profile", rows)?;
    let verdict = if pinsker_ok { Ok(()) } else { Err(LabError::Violation("Pinsker inequality failed".into())) };
    ctx.finish(verdict)
}
