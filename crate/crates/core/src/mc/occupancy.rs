use super::walker::{Direction, Walker};
use super::{check_ratio, Estimate, Experiment, McError, RATIO_EPS};
use crate::params::ShuffleParams;

/// Time card i spends in the bottom part while j and k sit in positions
/// 1..m−1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupancy {
    pub params: ShuffleParams,
    /// Positions of i, j, k at time 0.
    pub cards: [usize; 3],
    pub horizon: u64,
    /// Success when the alone time reaches this many steps.
    pub threshold: u64,
    /// Require every card, not only i, to reach the threshold.
    pub all_three: bool,
}

impl Occupancy {
    /// At least n − m of the next 5n steps. Needs m/n in (ε, 1 − ε).
    pub fn standard(params: &ShuffleParams, cards: [usize; 3]) -> Result<Self, McError> {
        check_ratio(params, RATIO_EPS)?;
        check_cards(params, cards)?;
        let (n, m) = (params.n() as u64, params.m() as u64);
        Ok(Self { params: *params, cards, horizon: 5 * n, threshold: n - m, all_three: false })
    }

    /// Each card alone for at least t/L steps, L = 160n·e^{10n/m}/(n−m).
    pub fn each_card(params: &ShuffleParams, cards: [usize; 3], horizon: u64) -> Result<Self, McError> {
        check_ratio(params, RATIO_EPS)?;
        check_cards(params, cards)?;
        let l = big_l(params);
        let threshold = libm::ceil(horizon as f64 / l) as u64;
        Ok(Self { params: *params, cards, horizon, threshold, all_three: true })
    }

    /// (1/8)·exp(−10n/m).
    pub fn lower_bound(&self) -> f64 {
        libm::exp(-10.0 * self.params.n() as f64 / self.params.m() as f64) / 8.0
    }

    /// Steps each card spent alone in the bottom part.
    pub fn alone_times(&self, seed: u64, index: u64) -> [u64; 3] {
        let m = self.params.m();
        let mut w = Walker::new(self.params.n(), m, Direction::Forward, &self.cards, seed, index);
        let mut alone = [0u64; 3];
        for _ in 0..self.horizon {
            let p = w.positions();
            for r in 0..3 {
                if p[r] > m && (0..3).all(|o| o == r || p[o] < m) {
                    alone[r] += 1;
                }
            }
            w.step();
        }
        alone
    }
}

fn check_cards(params: &ShuffleParams, cards: [usize; 3]) -> Result<(), McError> {
    for c in cards {
        params.check_position(c)?;
    }
    if cards[0] == cards[1] || cards[1] == cards[2] || cards[0] == cards[2] {
        return Err(McError::Precondition(alloc::format!("cards {cards:?} not distinct")));
    }
    Ok(())
}

/// L = 160n·e^{10n/m}/(n−m).
pub fn big_l(params: &ShuffleParams) -> f64 {
    let (n, m) = (params.n() as f64, params.m() as f64);
    160.0 * n * libm::exp(10.0 * n / m) / (n - m)
}

impl Experiment for Occupancy {
    fn name(&self) -> &'static str {
        "occupancy_alone_bottom"
    }

    fn trial(&self, seed: u64, index: u64) -> bool {
        let a = self.alone_times(seed, index);
        if self.all_three {
            a.iter().all(|&x| x >= self.threshold)
        } else {
            a[0] >= self.threshold
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OccupancyReport {
    pub estimate: Estimate,
    pub bound: f64,
    /// p̂'s upper confidence limit is at least the bound.
    pub bound_ok: bool,
    /// Mean and sample variance of card i's alone time / horizon.
    pub mean_fraction: f64,
    pub var_fraction: f64,
}

pub fn occupancy_alone_bottom(exp: &Occupancy, trials: u64, seed: u64) -> OccupancyReport {
    let mut hits = 0;
    let (mut s1, mut s2) = (0.0, 0.0);
    for idx in 0..trials {
        let a = exp.alone_times(seed, idx);
        let ok = if exp.all_three { a.iter().all(|&x| x >= exp.threshold) } else { a[0] >= exp.threshold };
        hits += u64::from(ok);
        let f = a[0] as f64 / exp.horizon as f64;
        s1 += f;
        s2 += f * f;
    }
    let k = trials as f64;
    let mean = s1 / k;
    let var = if trials > 1 { (s2 - k * mean * mean) / (k - 1.0) } else { 0.0 };
    let estimate = Estimate::new(hits, trials);
    let bound = exp.lower_bound();
    OccupancyReport { estimate, bound, bound_ok: estimate.ci95.1 >= bound, mean_fraction: mean, var_fraction: var }
}
