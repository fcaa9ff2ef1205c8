use alloc::vec::Vec;

use super::{norm, NormTable};
use crate::params::ShuffleParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpreadMode {
    /// Requires 100√n < ℓ < ℓ_max.
    Strict,
    /// Any 0 < ℓ < ℓ_max.
    Relaxed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpreadMethod {
    Halving { depth: u32 },
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadTriple {
    pub positions: [usize; 3],
    pub method: SpreadMethod,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpreadError {
    #[error("ell={ell} outside the admissible range ({lo}, {hi})")]
    OutOfRange { ell: f64, lo: f64, hi: f64 },
    #[error("no three positions within norm {ell} are pairwise more than {sep} apart")]
    NotFound { ell: f64, sep: f64 },
}

/// Three positions with ‖p(f)‖ < ℓ, pairwise ‖p(f) − p(f')‖ > ℓ/5.
///
/// Tries repeated halving of a norm-maximizing residue first (f_i = 1, f_j and
/// f_k next to consecutive halvings), then an exhaustive scan.
pub fn spread_triple(params: &ShuffleParams, ell: f64, mode: SpreadMode) -> Result<SpreadTriple, SpreadError> {
    let table = NormTable::new(params);
    let (lmax, z) = table.max();
    let lo = match mode {
        SpreadMode::Strict => 100.0 * params.sqrt_n(),
        SpreadMode::Relaxed => 0.0,
    };
    if !(ell > lo && ell < lmax) {
        return Err(SpreadError::OutOfRange { ell, lo, hi: lmax });
    }
    let ok = |t: [usize; 3]| valid(params, &table, ell, t);

    let d = norm(params, z);
    let m = params.m() as i64;
    let halve = |(a, b): (i64, i64)| (ceil_half(a), ceil_half(b));
    let mut cur = (d.a, d.b);
    let mut depth = 0u32;
    while cur != (0, 0) {
        let next = halve(cur);
        for fj in near(params, next.0 + next.1 * m) {
            for fk in near(params, cur.0 + cur.1 * m) {
                let t = [1, fj, fk];
                if ok(t) {
                    return Ok(SpreadTriple { positions: t, method: SpreadMethod::Halving { depth } });
                }
            }
        }
        if next == cur {
            break;
        }
        cur = next;
        depth += 1;
    }

    exhaustive(params, &table, ell)
        .map(|t| SpreadTriple { positions: t, method: SpreadMethod::Exhaustive })
        .ok_or(SpreadError::NotFound { ell, sep: ell / 5.0 })
}

/// Checks both post-conditions with the given norm table.
pub fn valid(params: &ShuffleParams, table: &NormTable, ell: f64, t: [usize; 3]) -> bool {
    let sep = ell / 5.0;
    t.iter().all(|&x| table.value(params.weight(x)) < ell)
        && table.between(t[0], t[1]) > sep
        && table.between(t[0], t[2]) > sep
        && table.between(t[1], t[2]) > sep
}

fn ceil_half(a: i64) -> i64 {
    a.div_euclid(2) + a.rem_euclid(2)
}

/// Positions whose weight is within 1 of `w`.
fn near(params: &ShuffleParams, w: i64) -> Vec<usize> {
    let mut out = Vec::with_capacity(3);
    for d in [0, -1, 1] {
        if let Some(x) = params.position_of_weight(w + d) {
            if !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

fn exhaustive(params: &ShuffleParams, table: &NormTable, ell: f64) -> Option<[usize; 3]> {
    let sep = ell / 5.0;
    let cand: Vec<usize> = (1..=params.n()).filter(|&x| table.value(params.weight(x)) < ell).collect();
    for (ia, &a) in cand.iter().enumerate() {
        for (ib, &b) in cand.iter().enumerate().skip(ia + 1) {
            if table.between(a, b) <= sep {
                continue;
            }
            for &c in &cand[ib + 1..] {
                if table.between(a, c) > sep && table.between(b, c) > sep {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}
