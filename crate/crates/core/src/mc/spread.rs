use alloc::format;
use alloc::string::String;

use super::walker::{Direction, Walker};
use super::{run_trials, ConstantProfile, Estimate, Experiment, McError};
use crate::metric::{l_max, select_time_t1, select_time_t2, spread_triple, NormTable, SpreadMode};
use crate::params::ShuffleParams;

/// Three cards run for `t` steps (forward or inverse); success when each
/// lands within `radius` (in norm) of its target.
#[derive(Debug, Clone)]
pub struct SpreadExperiment {
    pub params: ShuffleParams,
    pub cards: [usize; 3],
    pub targets: [usize; 3],
    pub t: u64,
    pub radius: f64,
    pub direction: Direction,
    table: NormTable,
}

impl SpreadExperiment {
    /// Cards 1, 2, 3 aimed at a spread triple of norm < ℓ (pairwise more
    /// than ℓ/5 apart), landing radius ℓ/divisor, T the first time in
    /// [ℓ², ℓ² + 4n] with T − ⌊T/2n⌋(m−1) ≡ 0.
    pub fn stage_one(params: &ShuffleParams, ell: f64, divisor: f64, direction: Direction) -> Result<Self, McError> {
        if !(ell > 0.0 && ell <= params.n() as f64) {
            return Err(McError::Precondition(format!("need 0 < ell <= n, got {ell}")));
        }
        let targets = spread_triple(params, ell, SpreadMode::Relaxed)
            .map_err(|e| McError::Precondition(format!("{e}")))?
            .positions;
        let t = select_time_t1(params, libm::ceil(ell * ell) as u64).map_err(|e| McError::Precondition(format!("{e}")))?;
        Self::new(params, [1, 2, 3], targets, t, ell, divisor, direction)
    }

    pub fn new(
        params: &ShuffleParams,
        cards: [usize; 3],
        targets: [usize; 3],
        t: u64,
        ell: f64,
        divisor: f64,
        direction: Direction,
    ) -> Result<Self, McError> {
        let table = NormTable::new(params);
        for r in 0..3 {
            params.check_position(cards[r])?;
            params.check_position(targets[r])?;
            let d = table.between(cards[r], targets[r]);
            if d > 2.0 * ell {
                return Err(McError::Precondition(format!("target {} is {d} > 2 ell from card {}", targets[r], cards[r])));
            }
        }
        Ok(Self { params: *params, cards, targets, t, radius: ell / divisor, direction, table })
    }
}

impl Experiment for SpreadExperiment {
    fn name(&self) -> &'static str {
        match self.direction {
            Direction::Forward => "spread_forward",
            Direction::Inverse => "spread_inverse",
        }
    }

    fn trial(&self, seed: u64, index: u64) -> bool {
        let mut w = Walker::new(self.params.n(), self.params.m(), self.direction, &self.cards, seed, index);
        w.advance_to(self.t);
        w.positions().iter().zip(&self.targets).all(|(&x, &f)| self.table.between(x, f) < self.radius)
    }
}

pub fn spread_experiment(
    params: &ShuffleParams,
    ell: f64,
    divisor: f64,
    trials: u64,
    direction: Direction,
    seed: u64,
) -> Result<Estimate, McError> {
    Ok(run_trials(&SpreadExperiment::stage_one(params, ell, divisor, direction)?, seed, 0..trials))
}

/// Three well-separated cards hitting three exact target positions at 2T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Targeting {
    pub params: ShuffleParams,
    pub cards: [usize; 3],
    pub targets: [usize; 3],
    pub t: u64,
}

impl Targeting {
    /// Cards pairwise more than spread_factor·ℓ apart, each target within
    /// target_margin·ℓ of its card and the targets again pairwise more than
    /// spread_factor·ℓ apart; T the first time in (ℓ², ℓ² + 4n) with
    /// T − ⌊T/2n⌋m ≡ 0.
    pub fn new(params: &ShuffleParams, ell: f64, profile: &ConstantProfile) -> Result<Self, McError> {
        let infeasible = |h: String| McError::Infeasible { profile: profile.name, hypothesis: h };
        let lmax = l_max(params);
        let sep = profile.spread_factor * ell;
        if ell <= params.sqrt_n() {
            return Err(infeasible(format!("ell = {ell} must exceed sqrt n")));
        }
        if sep >= lmax {
            return Err(infeasible(format!("separation {sep:.2} not below l_max = {lmax:.2}")));
        }
        let table = NormTable::new(params);
        let n = params.n();
        let cards = greedy_spread(&table, n, 1, sep)
            .ok_or_else(|| infeasible(format!("no three cards pairwise more than {sep:.2} apart")))?;
        let margin = profile.target_margin * ell;
        let mut targets = [0; 3];
        for r in 0..3 {
            // farthest position still inside the margin
            targets[r] = (1..=n)
                .filter(|&y| y != cards[r] && table.between(cards[r], y) < margin)
                .max_by(|&a, &b| table.between(cards[r], a).total_cmp(&table.between(cards[r], b)))
                .ok_or_else(|| infeasible(format!("no target within {margin:.2} of card {}", cards[r])))?;
        }
        let apart = |a: usize, b: usize| table.between(a, b) > sep;
        if !(apart(targets[0], targets[1]) && apart(targets[0], targets[2]) && apart(targets[1], targets[2])) {
            return Err(infeasible(format!("targets {targets:?} not pairwise more than {sep:.2} apart")));
        }
        let s = libm::floor(ell * ell) as u64 + 1;
        let t = select_time_t2(params, s).map_err(|e| infeasible(format!("{e}")))?;
        Ok(Self { params: *params, cards, targets, t })
    }

    /// Two targets coincide, so the event is impossible.
    pub fn control(mut self) -> Self {
        self.targets[1] = self.targets[0];
        self
    }
}

/// Card `first` plus two more chosen greedily to maximise the smallest
/// pairwise norm; `None` if that minimum is not above `sep`.
fn greedy_spread(table: &NormTable, n: usize, first: usize, sep: f64) -> Option<[usize; 3]> {
    let far = |from: &[usize]| {
        (1..=n)
            .filter(|y| !from.contains(y))
            .max_by(|&a, &b| {
                let da = from.iter().map(|&x| table.between(x, a)).fold(f64::INFINITY, f64::min);
                let db = from.iter().map(|&x| table.between(x, b)).fold(f64::INFINITY, f64::min);
                da.total_cmp(&db).then(b.cmp(&a))
            })
            .unwrap()
    };
    let j = far(&[first]);
    let k = far(&[first, j]);
    let t = [first, j, k];
    let ok = (0..3).all(|a| (a + 1..3).all(|b| table.between(t[a], t[b]) > sep));
    ok.then_some(t)
}

impl Experiment for Targeting {
    fn name(&self) -> &'static str {
        "targeting"
    }

    fn trial(&self, seed: u64, index: u64) -> bool {
        let mut w = Walker::new(self.params.n(), self.params.m(), Direction::Forward, &self.cards, seed, index);
        w.advance_to(2 * self.t);
        w.positions() == self.targets
    }
}

pub fn estimate_targeting(
    params: &ShuffleParams,
    ell: f64,
    profile: &ConstantProfile,
    trials: u64,
    seed: u64,
) -> Result<Estimate, McError> {
    Ok(run_trials(&Targeting::new(params, ell, profile)?, seed, 0..trials))
}
