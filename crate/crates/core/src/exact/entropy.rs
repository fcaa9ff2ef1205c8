use super::perm::rank_parity;
use super::{tv_to_target, DistVector, Support, Target};
use crate::KahanSum;

/// Relative entropies (nats) and TV distance of a full-deck distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    /// Σ p log(|U| p) against the uniform target U; infinite if mass sits
    /// outside U.
    pub ent: f64,
    /// Relative entropy to uniform within each sign class, averaged over
    /// the sign.
    pub ent_given_sign: f64,
    pub tv: f64,
    /// tv ≤ √(ent/2).
    pub pinsker_ok: bool,
}

pub fn entropy_report(dist: &DistVector, target: Target) -> EntropyReport {
    let Support::Perms(n) = dist.support() else { panic!("full-deck distribution expected") };
    let size = target.size(n) as f64;
    let half = (target.size(n) as f64) * if target == Target::UniformSn { 0.5 } else { 1.0 };
    let mut sign_mass = [KahanSum::new(), KahanSum::new()];
    let mut ent = KahanSum::new();
    let mut outside = false;
    for (r, &p) in dist.probs().iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        let s = rank_parity(r, n);
        sign_mass[s].add(p);
        if target.contains(s) {
            ent.add(p * libm::log(size * p));
        } else {
            outside = true;
        }
    }
    let ps = [sign_mass[0].total(), sign_mass[1].total()];
    let mut cond = KahanSum::new();
    for (r, &p) in dist.probs().iter().enumerate() {
        if p > 0.0 {
            cond.add(p * libm::log(half * p / ps[rank_parity(r, n)]));
        }
    }
    let ent = if outside { f64::INFINITY } else { ent.total() };
    let tv = tv_to_target(dist, target);
    EntropyReport { ent, ent_given_sign: cond.total(), tv, pinsker_ok: tv <= libm::sqrt(ent / 2.0) + 1e-12 }
}
