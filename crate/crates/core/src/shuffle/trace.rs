use alloc::vec::Vec;

use super::{next_position, Coin, CoinSource};
use crate::metric::norm;
use crate::params::ShuffleParams;

/// Which record, if any, a step's coin counts towards for one card.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoinUse {
    /// Card in positions 1..m−1: moves down regardless of the coin.
    Top,
    /// Card at position m.
    Big(Coin),
    /// Card in positions m+1..n.
    Small(Coin),
}

/// Running Heads/Tails counts of the big (position m) and small (bottom
/// part) records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counters {
    pub h_b: u64,
    pub t_b: u64,
    pub h_s: u64,
    pub t_s: u64,
}

impl Counters {
    #[inline]
    pub fn record(&mut self, u: CoinUse) {
        match u {
            CoinUse::Top => {}
            CoinUse::Big(Coin::Heads) => self.h_b += 1,
            CoinUse::Big(Coin::Tails) => self.t_b += 1,
            CoinUse::Small(Coin::Heads) => self.h_s += 1,
            CoinUse::Small(Coin::Tails) => self.t_s += 1,
        }
    }

    /// Diff of the big record: Heads minus Tails.
    pub fn diff_b(&self) -> i64 {
        self.h_b as i64 - self.t_b as i64
    }

    /// Diff of the small record: Heads minus Tails.
    pub fn diff_s(&self) -> i64 {
        self.h_s as i64 - self.t_s as i64
    }

    /// (T_S − H_S) + (T_B − m·H_B): the weight change beyond one per step.
    pub fn drift(&self, m: usize) -> i64 {
        self.t_s as i64 - self.h_s as i64 + self.t_b as i64 - (m as u64 * self.h_b) as i64
    }
}

#[inline]
pub fn classify(m: usize, pos: usize, coin: Coin) -> CoinUse {
    if pos < m {
        CoinUse::Top
    } else if pos == m {
        CoinUse::Big(coin)
    } else {
        CoinUse::Small(coin)
    }
}

/// Path of one card with its coin records.
#[derive(Debug, Clone, PartialEq)]
pub struct CardTrace {
    pub card: usize,
    /// Position after r steps, r = 0..=t.
    pub path: Vec<usize>,
    /// How the coin of step r counted, r = 0..t.
    pub uses: Vec<CoinUse>,
    pub h_b: u64,
    pub t_b: u64,
    pub h_s: u64,
    pub t_s: u64,
}

impl CardTrace {
    pub fn steps(&self) -> usize {
        self.uses.len()
    }

    pub fn counters(&self) -> Counters {
        Counters { h_b: self.h_b, t_b: self.t_b, h_s: self.h_s, t_s: self.t_s }
    }

    /// Counters after the first `r` steps.
    pub fn counters_at(&self, r: usize) -> Counters {
        let mut c = Counters::default();
        for &u in &self.uses[..r] {
            c.record(u);
        }
        c
    }

    pub fn diff_b(&self) -> i64 {
        self.counters().diff_b()
    }

    pub fn diff_s(&self) -> i64 {
        self.counters().diff_s()
    }
}

/// Follow card `i` (starting at position i) through `t` coins.
pub fn track_card(params: &ShuffleParams, i: usize, coins: &mut impl CoinSource, t: usize) -> CardTrace {
    let (n, m) = (params.n(), params.m());
    assert!(i >= 1 && i <= n, "card {i} outside 1..={n}");
    let mut path = Vec::with_capacity(t + 1);
    let mut uses = Vec::with_capacity(t);
    let mut c = Counters::default();
    let mut pos = i;
    path.push(pos);
    for _ in 0..t {
        let coin = coins.next_coin();
        let u = classify(m, pos, coin);
        c.record(u);
        uses.push(u);
        pos = next_position(n, m, pos, coin);
        path.push(pos);
    }
    CardTrace { card: i, path, uses, h_b: c.h_b, t_b: c.t_b, h_s: c.h_s, t_s: c.t_s }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("weight congruence fails after {step} steps: position {position}, expected weight {expected} mod {modulus}, counters {counters:?}")]
pub struct IdentityViolation {
    pub step: usize,
    pub position: usize,
    pub expected: i64,
    pub modulus: i64,
    pub counters: Counters,
}

/// p(i_r) ≡ p(i) + r + (T_S − H_S) + (T_B − m·H_B) at every step r, and the
/// stored totals agree with the per-step records.
pub fn verify_movement_identity(trace: &CardTrace, params: &ShuffleParams) -> Result<(), IdentityViolation> {
    let m = params.m();
    let p0 = params.weight(trace.path[0]);
    let mut c = Counters::default();
    for r in 0..=trace.steps() {
        if r > 0 {
            c.record(trace.uses[r - 1]);
        }
        let expected = p0 + r as i64 + c.drift(m);
        let pos = trace.path[r];
        if params.reduce(params.weight(pos) - expected) != 0 {
            return Err(IdentityViolation {
                step: r,
                position: pos,
                expected: params.reduce(expected),
                modulus: params.modulus(),
                counters: c,
            });
        }
    }
    if c != trace.counters() {
        let r = trace.steps();
        return Err(IdentityViolation {
            step: r,
            position: trace.path[r],
            expected: params.reduce(p0 + r as i64 + trace.counters().drift(m)),
            modulus: params.modulus(),
            counters: trace.counters(),
        });
    }
    Ok(())
}

/// Both sides of the long-run position bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub t: u64,
    /// Diff of the small record.
    pub x: i64,
    /// Diff of the big record.
    pub y: i64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("position bound fails at t={}: {} > {}", .0.t, .0.lhs, .0.rhs)]
pub struct BoundViolation(pub BoundCheck);

/// ‖p(i_t) − p(i) − (t − ⌊t/2n⌋(m−1) − x − ⌊y(2n−m)/(2n)⌋·m)‖
///   ≤ |y|/2 + |x|/(2n)·(√n + 1) + 4√n
/// with x = H_S − T_S and y = H_B − T_B over the whole trace.
pub fn movement_bound(trace: &CardTrace, params: &ShuffleParams) -> BoundCheck {
    let (n, m) = (params.n() as i64, params.m() as i64);
    let t = trace.steps() as i64;
    let x = trace.diff_s();
    let y = trace.diff_b();
    let big = (y * (2 * n - m)).div_euclid(2 * n);
    let predicted = t - (t / (2 * n)) * (m - 1) - x - big * m;
    let moved = params.weight(*trace.path.last().unwrap()) - params.weight(trace.path[0]);
    let lhs = norm(params, moved - predicted).value;
    let sqrt_n = params.sqrt_n();
    let rhs = (y.abs() as f64) / 2.0 + (x.abs() as f64) / (2.0 * n as f64) * (sqrt_n + 1.0) + 4.0 * sqrt_n;
    BoundCheck { t: t as u64, x, y, lhs, rhs }
}

pub fn verify_movement_bound(trace: &CardTrace, params: &ShuffleParams) -> Result<BoundCheck, BoundViolation> {
    let c = movement_bound(trace, params);
    if c.lhs <= c.rhs + 1e-9 {
        Ok(c)
    } else {
        Err(BoundViolation(c))
    }
}

/// p(j_t) − p(i_t) from the two cards' records, reduced mod 2n−m+1.
pub fn compare_cards(params: &ShuffleParams, a: &CardTrace, b: &CardTrace) -> i64 {
    let m = params.m();
    let d0 = params.weight(b.path[0]) - params.weight(a.path[0]);
    params.reduce(d0 + b.counters().drift(m) - a.counters().drift(m))
}
