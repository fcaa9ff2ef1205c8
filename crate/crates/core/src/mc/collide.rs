use alloc::format;

use super::walker::{Direction, Walker};
use super::{run_trials, ConstantProfile, Estimate, Experiment, McError};
use crate::metric::{l_max, m_distance, norm, select_time_t1, select_time_t2};
use crate::params::ShuffleParams;
use crate::shuffle::prev_position;

fn cyclic_match(pos: &[usize], order: [usize; 3], m: usize, n: usize) -> bool {
    (0..3).any(|r| pos[order[r]] == m - 1 && pos[order[(r + 1) % 3]] == m && pos[order[(r + 2) % 3]] == n)
}

/// Three cards started at given positions. Success: the first collision
/// after `big_t` that involves any of them involves all three, in the given
/// cyclic order at positions (m−1, m, n), at an even time in (big_t, t_end].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleCollide {
    pub name: &'static str,
    pub params: ShuffleParams,
    /// Positions of (i, j, k) at time 0.
    pub start: [usize; 3],
    /// Role indices (0 = i, 1 = j, 2 = k) in cycle order.
    pub order: [usize; 3],
    pub big_t: u64,
    pub t_end: u64,
}

/// (i, k, j): i at m−1, k at m, j at n.
pub const ORDER_IKJ: [usize; 3] = [0, 2, 1];
/// (i, j, k): j is the front partner of i and k the back one.
pub const ORDER_IJK: [usize; 3] = [0, 1, 2];

impl TripleCollide {
    /// Same event over an empty window; never succeeds.
    pub fn control(mut self) -> Self {
        self.t_end = self.big_t;
        self
    }
}

impl Experiment for TripleCollide {
    fn name(&self) -> &'static str {
        self.name
    }

    fn trial(&self, seed: u64, index: u64) -> bool {
        let (n, m) = (self.params.n(), self.params.m());
        let mut w = Walker::new(n, m, Direction::Forward, &self.start, seed, index);
        w.advance_to(self.big_t + 1);
        while w.next_exposure(self.t_end).is_some() {
            let (a, b) = w.peek2();
            if a != b {
                return cyclic_match(w.positions(), self.order, m, n);
            }
            w.step();
        }
        false
    }
}

fn band_low(n: usize) -> usize {
    // smallest card strictly above n − √n
    libm::floor(n as f64 - libm::sqrt(n as f64)) as usize + 1
}

fn in_band(n: usize, x: usize) -> bool {
    x >= band_low(n) && x <= n
}

/// Which of the two starting layouts near the bottom of the deck.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum L1Variant {
    /// j = i+1, k = i+2.
    Adjacent,
    /// k = i+1, j = n.
    Gap,
}

/// First collision of the lowest band cards in the window (2n, 2n + 4√n].
pub fn l1_collision(params: &ShuffleParams, variant: L1Variant) -> Result<TripleCollide, McError> {
    let n = params.n();
    let i = band_low(n);
    if i + 2 > n {
        return Err(McError::Precondition(format!("band (n-sqrt n, n] holds fewer than 3 cards at n={n}")));
    }
    let (j, k) = match variant {
        L1Variant::Adjacent => (i + 1, i + 2),
        L1Variant::Gap => (n, i + 1),
    };
    let big_t = 2 * n as u64;
    Ok(TripleCollide {
        name: "l1_collision",
        params: *params,
        start: [i, j, k],
        order: ORDER_IKJ,
        big_t,
        t_end: big_t + libm::floor(4.0 * params.sqrt_n()) as u64,
    })
}

pub fn estimate_l1_collision(
    params: &ShuffleParams,
    variant: L1Variant,
    trials: u64,
    seed: u64,
) -> Result<Estimate, McError> {
    Ok(run_trials(&l1_collision(params, variant)?, seed, 0..trials))
}

/// Front match of i above i and back match equal to j, over (2n, 2n + 4√n].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchProb {
    pub params: ShuffleParams,
    pub i: usize,
    pub j: usize,
    pub big_t: u64,
    pub t_end: u64,
}

impl MatchProb {
    pub fn new(params: &ShuffleParams, i: usize, j: usize) -> Result<Self, McError> {
        let n = params.n();
        if !(in_band(n, i) && in_band(n, j)) {
            return Err(McError::Precondition(format!("cards {i}, {j} not both in (n-sqrt n, n] for n={n}")));
        }
        if !(i < j && i + 2 <= n) {
            return Err(McError::Precondition(format!("need i < j and i <= n-2, got i={i}, j={j}")));
        }
        let big_t = 2 * n as u64;
        Ok(Self { params: *params, i, j, big_t, t_end: big_t + libm::floor(4.0 * params.sqrt_n()) as u64 })
    }

    pub fn control(mut self) -> Self {
        self.t_end = self.big_t;
        self
    }
}

impl Experiment for MatchProb {
    fn name(&self) -> &'static str {
        "match_prob"
    }

    fn trial(&self, seed: u64, index: u64) -> bool {
        let (n, m) = (self.params.n(), self.params.m());
        let slots = [m - 1, m, n];
        let mut w = Walker::new(n, m, Direction::Forward, &[self.i, self.j], seed, index).record();
        w.advance_to(self.big_t + 1);
        while let Some(s) = w.next_exposure(self.t_end) {
            let (a, b) = w.peek2();
            if a == b {
                w.step();
                continue;
            }
            let (pi, pj) = (w.positions()[0], w.positions()[1]);
            let Some(r) = slots.iter().position(|&x| x == pi) else {
                // j collides before i does
                return false;
            };
            if slots[(r + 2) % 3] != pj {
                return false;
            }
            let front_pos = slots[(r + 1) % 3];
            let tape = w.tape().unwrap();
            // walk the front card back to time 0, watching for an earlier
            // collision inside the window
            let mut x = front_pos;
            for u in (0..s).rev() {
                x = prev_position(n, m, x, tape.get(u));
                if u % 2 == 0 && u > self.big_t && slots.contains(&x) && tape.get(u) != tape.get(u + 1) {
                    return false;
                }
            }
            return x > self.i;
        }
        false
    }
}

pub fn estimate_match_prob(
    params: &ShuffleParams,
    i: usize,
    j: usize,
    trials: u64,
    seed: u64,
) -> Result<Estimate, McError> {
    Ok(run_trials(&MatchProb::new(params, i, j)?, seed, 0..trials))
}

/// Cards at pairwise M-distance below √n, ordered collision within 10n.
pub fn sqrtn_collide(params: &ShuffleParams, start: [usize; 3]) -> Result<TripleCollide, McError> {
    let sq = params.sqrt_n();
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        params.check_position(start[a])?;
        let d = m_distance(params, params.weight(start[a]) - params.weight(start[b]));
        if d as f64 >= sq || start[a] == start[b] {
            return Err(McError::Precondition(format!("positions {start:?} not pairwise within sqrt n")));
        }
    }
    Ok(sqrtn_unchecked(params, start))
}

fn sqrtn_unchecked(params: &ShuffleParams, start: [usize; 3]) -> TripleCollide {
    TripleCollide {
        name: "sqrtn_collide",
        params: *params,
        start,
        order: ORDER_IKJ,
        big_t: 0,
        t_end: 10 * params.n() as u64,
    }
}

/// Default close start: i, k, j at n − 2s, n − s, n with s = ⌊√n/5⌋, so
/// the weights are at most 4s < √n apart.
pub fn sqrtn_close_start(params: &ShuffleParams) -> [usize; 3] {
    let n = params.n();
    let s = (libm::floor(params.sqrt_n() / 5.0) as usize).max(1);
    [n - 2 * s, n, n - s]
}

/// Cards spread around the deck; a negative control (no precondition check).
pub fn sqrtn_far_start(params: &ShuffleParams) -> TripleCollide {
    let (n, m) = (params.n(), params.m());
    sqrtn_unchecked(params, [1, m / 2 + 1, (m + n) / 2 + 1])
}

pub fn estimate_sqrtn_collide(params: &ShuffleParams, trials: u64, seed: u64) -> Result<Estimate, McError> {
    Ok(run_trials(&sqrtn_collide(params, sqrtn_close_start(params))?, seed, 0..trials))
}

/// The whole spread, target and collide pipeline observed end to end:
/// cards of norm < ℓ run for T = 2T₁ + 2T₂ steps, then i must collide
/// first with j in front and k behind within the collision window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullCollide {
    pub inner: TripleCollide,
    pub ell: f64,
    pub t1: u64,
    pub t2: u64,
}

impl FullCollide {
    pub fn new(
        params: &ShuffleParams,
        ell: f64,
        cards: [usize; 3],
        profile: &ConstantProfile,
    ) -> Result<Self, McError> {
        let infeasible = |h: alloc::string::String| McError::Infeasible { profile: profile.name, hypothesis: h };
        let lmax = l_max(params);
        if !(ell >= params.sqrt_n() && ell <= lmax) {
            return Err(infeasible(format!("need sqrt n <= ell <= l_max = {lmax:.3}, got ell = {ell}")));
        }
        let ell2 = profile.stage2_ell(ell);
        if ell2 < 1.0 {
            return Err(infeasible(format!("stage-two scale {ell2:.4} < 1 at ell = {ell}")));
        }
        for &c in &cards {
            params.check_position(c)?;
            let v = norm(params, params.weight(c)).value;
            if v >= ell {
                return Err(McError::Precondition(format!("card {c} has norm {v} >= ell = {ell}")));
            }
        }
        if cards[0] == cards[1] || cards[1] == cards[2] || cards[0] == cards[2] {
            return Err(McError::Precondition(format!("cards {cards:?} not distinct")));
        }
        let sel = |r: Result<u64, crate::metric::SelectorExhausted>| r.map_err(|e| infeasible(format!("{e}")));
        let t1 = sel(select_time_t1(params, libm::ceil(ell * ell) as u64))?;
        let t2 = sel(select_time_t2(params, libm::ceil(ell2 * ell2) as u64))?;
        let big_t = 2 * t1 + 2 * t2;
        Ok(Self {
            inner: TripleCollide {
                name: "full_collide",
                params: *params,
                start: cards,
                order: ORDER_IJK,
                big_t,
                t_end: big_t + profile.collide_window * params.n() as u64,
            },
            ell,
            t1,
            t2,
        })
    }

    pub fn control(mut self) -> Self {
        self.inner = self.inner.control();
        self
    }
}

impl Experiment for FullCollide {
    fn name(&self) -> &'static str {
        "full_collide"
    }

    fn trial(&self, seed: u64, index: u64) -> bool {
        self.inner.trial(seed, index)
    }
}

/// Default cards: positions 1, 2, 3 (norms 1, 2, 3).
pub fn estimate_full_collide(
    params: &ShuffleParams,
    ell: f64,
    profile: &ConstantProfile,
    trials: u64,
    seed: u64,
) -> Result<Estimate, McError> {
    Ok(run_trials(&FullCollide::new(params, ell, [1, 2, 3], profile)?, seed, 0..trials))
}
