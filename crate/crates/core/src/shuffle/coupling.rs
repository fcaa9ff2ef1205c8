//! Two shuffles π (cards i, j, k) and π' (cards i', j', k') driven by shared
//! coin pools so that the tracked cards lock onto their counterparts one at a
//! time.
//!
//! Pool rules for π' never change: B^x when x' sits at m, otherwise S^i, S^j,
//! S^k in that priority for the cards in the bottom part. π moves through
//! phases; in phase p the first p−1 roles are coupled and read their S pool
//! (κ) at their own index, which is set to π''s index at the moment of
//! coupling.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::Rng;

use super::router::bottom_mask;
use super::{keyed_rng, next_position, Coin, CoinTape, PoolLabel, Pools, Role, RoleSet, SeededPools};
use crate::metric::{m_distance, NormTable};
use crate::params::ShuffleParams;

#[derive(Debug, Clone, PartialEq)]
pub struct CoupleConfig {
    pub ell: f64,
    /// Tracked cards must be pairwise more than `spread_factor·ℓ` apart.
    pub spread_factor: f64,
    pub tracked: [usize; 3],
    /// Drawn uniformly within 8ℓ in |·|_M of each tracked card when absent.
    pub counterparts: Option<[usize; 3]>,
    pub horizon: u64,
    pub seed: u64,
    pub record_trace: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoupleError {
    #[error("cards {a} and {b} are {dist} apart, need more than {need}")]
    NotSpread { a: usize, b: usize, dist: f64, need: f64 },
    #[error("tracked cards must be distinct positions in 1..=n")]
    BadCards,
    #[error("no free counterpart within 8*ell of card {0}")]
    NoCounterpart(usize),
}

/// Per-pool draw counts of one side.
pub type PoolCounters = BTreeMap<PoolLabel, u64>;

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledState {
    pub t: u64,
    /// 1..=4; roles before index `phase − 1` are coupled.
    pub phase: u8,
    pub pi: [usize; 3],
    pub prime: [usize; 3],
    pub used_pi: PoolCounters,
    pub used_prime: PoolCounters,
}

impl CoupledState {
    /// Fresh state at t = 0, with the first big coin skipped on the side
    /// whose card starts below m while its counterpart is at or above m.
    pub fn start(params: &ShuffleParams, pi: [usize; 3], prime: [usize; 3]) -> Self {
        let m = params.m();
        let mut used_pi = PoolCounters::new();
        let mut used_prime = PoolCounters::new();
        for r in Role::ALL {
            let (a, b) = (pi[r.index()], prime[r.index()]);
            if b <= m && m < a {
                used_pi.insert(PoolLabel::B(r), 1);
            } else if a <= m && m < b {
                used_prime.insert(PoolLabel::B(r), 1);
            }
        }
        Self { t: 0, phase: 1, pi, prime, used_pi, used_prime }
    }

    fn used(c: &PoolCounters, l: PoolLabel) -> u64 {
        c.get(&l).copied().unwrap_or(0)
    }

    pub fn coupled(&self, r: Role) -> bool {
        r.index() + 1 < self.phase as usize
    }

    /// Both sides have consumed the same number of coins from every B pool.
    pub fn big_synced(&self) -> bool {
        Role::ALL.into_iter().all(|r| {
            Self::used(&self.used_pi, PoolLabel::B(r)) == Self::used(&self.used_prime, PoolLabel::B(r))
        })
    }

    fn small_synced(&self, r: Role) -> bool {
        let l = PoolLabel::S(RoleSet::single(r));
        Self::used(&self.used_pi, l) == Self::used(&self.used_prime, l)
    }
}

/// Pool for π in the given state.
pub fn route_pi(params: &ShuffleParams, s: &CoupledState) -> PoolLabel {
    let m = params.m();
    if let Some(r) = Role::ALL.into_iter().find(|r| s.pi[r.index()] == m) {
        return PoolLabel::B(r);
    }
    let bottom = |r: Role| s.pi[r.index()] > m;
    let kappa = |r: Role| PoolLabel::S(RoleSet::single(r));
    let mask = bottom_mask(m, s.pi);
    match s.phase {
        1 if mask != 0 => PoolLabel::X(RoleSet::from_mask(mask)),
        2 if bottom(Role::I) => kappa(Role::I),
        2 if mask != 0 => PoolLabel::Y(RoleSet::from_mask(mask)),
        3 if bottom(Role::I) => kappa(Role::I),
        3 if bottom(Role::J) => kappa(Role::J),
        3 if bottom(Role::K) => PoolLabel::Z(Role::K),
        4 => Role::ALL.into_iter().find(|&r| bottom(r)).map_or(PoolLabel::Free, kappa),
        _ => PoolLabel::Free,
    }
}

/// Pool for π' in the given state.
pub fn route_prime(params: &ShuffleParams, s: &CoupledState) -> PoolLabel {
    let m = params.m();
    if let Some(r) = Role::ALL.into_iter().find(|r| s.prime[r.index()] == m) {
        return PoolLabel::B(r);
    }
    Role::ALL
        .into_iter()
        .find(|r| s.prime[r.index()] > m)
        .map_or(PoolLabel::Free, |r| PoolLabel::S(RoleSet::single(r)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoupledStep {
    pub step: u64,
    pub phase: u8,
    pub pool_pi: PoolLabel,
    pub coin_pi: Coin,
    pub pool_prime: PoolLabel,
    pub coin_prime: Coin,
    /// Positions after the step.
    pub pi: [usize; 3],
    pub prime: [usize; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecouplingCause {
    /// All shared pools are in step again but the pair sits apart.
    ApartWhenSynced,
    /// A coupled pair drifted more than one position apart.
    GapExceeded { gap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decoupling {
    pub time: u64,
    pub role: Role,
    pub cause: DecouplingCause,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingReport {
    pub tracked: [usize; 3],
    pub counterparts: [usize; 3],
    /// τ₁, τ₂, τ₃.
    pub tau: [Option<u64>; 3],
    pub steps: u64,
    pub final_pi: [usize; 3],
    pub final_prime: [usize; 3],
    /// All three coupled by the horizon and equal there.
    pub success: bool,
    pub decoupling: Option<Decoupling>,
    /// Largest position gap of a coupled pair.
    pub max_gap: usize,
    pub trace: Vec<CoupledStep>,
    /// Coins π used, one per step (only with `record_trace`).
    pub coins_pi: CoinTape,
    pub coins_prime: CoinTape,
}

/// Step-by-step driver of a coupled pair.
pub struct CoupledSim<'a, P: Pools> {
    params: ShuffleParams,
    pub state: CoupledState,
    pools: &'a mut P,
    pub tau: [Option<u64>; 3],
    pub decoupling: Option<Decoupling>,
    pub max_gap: usize,
}

impl<'a, P: Pools> CoupledSim<'a, P> {
    pub fn new(params: &ShuffleParams, state: CoupledState, pools: &'a mut P) -> Self {
        let mut sim = Self { params: *params, state, pools, tau: [None; 3], decoupling: None, max_gap: 0 };
        sim.advance_phases();
        sim
    }

    fn draw(pools: &mut P, used: &mut PoolCounters, label: PoolLabel) -> Coin {
        let idx = used.entry(label).or_insert(0);
        let c = pools.coin(label, *idx);
        *idx += 1;
        c
    }

    pub fn step(&mut self) -> CoupledStep {
        let (n, m) = (self.params.n(), self.params.m());
        let phase = self.state.phase;
        let pool_pi = route_pi(&self.params, &self.state);
        let pool_prime = route_prime(&self.params, &self.state);
        let coin_pi = Self::draw(self.pools, &mut self.state.used_pi, pool_pi);
        let coin_prime = Self::draw(self.pools, &mut self.state.used_prime, pool_prime);
        for x in &mut self.state.pi {
            *x = next_position(n, m, *x, coin_pi);
        }
        for x in &mut self.state.prime {
            *x = next_position(n, m, *x, coin_prime);
        }
        self.state.t += 1;
        self.diagnose();
        self.advance_phases();
        CoupledStep {
            step: self.state.t,
            phase,
            pool_pi,
            coin_pi,
            pool_prime,
            coin_prime,
            pi: self.state.pi,
            prime: self.state.prime,
        }
    }

    fn advance_phases(&mut self) {
        while self.state.phase < 4 {
            let r = Role::ALL[self.state.phase as usize - 1];
            if self.state.pi[r.index()] != self.state.prime[r.index()] || !self.state.big_synced() {
                break;
            }
            let s = PoolLabel::S(RoleSet::single(r));
            let at = self.state.used_prime.get(&s).copied().unwrap_or(0);
            self.state.used_pi.insert(s, at);
            self.tau[r.index()] = Some(self.state.t);
            self.state.phase += 1;
        }
    }

    fn diagnose(&mut self) {
        let synced = self.state.big_synced();
        for r in Role::ALL.into_iter().filter(|&r| self.state.coupled(r)) {
            let (a, b) = (self.state.pi[r.index()], self.state.prime[r.index()]);
            let gap = a.abs_diff(b);
            self.max_gap = self.max_gap.max(gap);
            if self.decoupling.is_some() {
                continue;
            }
            let cause = if gap > 1 {
                Some(DecouplingCause::GapExceeded { gap })
            } else if gap != 0 && synced && self.state.small_synced(r) {
                Some(DecouplingCause::ApartWhenSynced)
            } else {
                None
            };
            if let Some(cause) = cause {
                self.decoupling = Some(Decoupling { time: self.state.t, role: r, cause });
            }
        }
    }
}

/// Uniform draw among free positions y with |p(y) − p(x)|_M ≤ 8ℓ.
fn sample_counterparts(params: &ShuffleParams, cfg: &CoupleConfig) -> Result<[usize; 3], CoupleError> {
    let mut rng = keyed_rng(cfg.seed, 0xC0_0B1E);
    let mut out = [0usize; 3];
    for r in 0..3 {
        let x = cfg.tracked[r];
        let cand: Vec<usize> = (1..=params.n())
            .filter(|&y| !out[..r].contains(&y))
            .filter(|&y| m_distance(params, params.weight(y) - params.weight(x)) as f64 <= 8.0 * cfg.ell)
            .collect();
        if cand.is_empty() {
            return Err(CoupleError::NoCounterpart(x));
        }
        out[r] = cand[rng.random_range(0..cand.len())];
    }
    Ok(out)
}

pub fn coupled_run(params: &ShuffleParams, cfg: &CoupleConfig) -> Result<CouplingReport, CoupleError> {
    let mut pools = SeededPools::new(cfg.seed);
    coupled_run_with(params, cfg, &mut pools)
}

pub fn coupled_run_with(
    params: &ShuffleParams,
    cfg: &CoupleConfig,
    pools: &mut impl Pools,
) -> Result<CouplingReport, CoupleError> {
    let t = cfg.tracked;
    if t.iter().any(|&c| c == 0 || c > params.n()) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
        return Err(CoupleError::BadCards);
    }
    let table = NormTable::new(params);
    let need = cfg.spread_factor * cfg.ell;
    for (a, b) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
        let dist = table.between(a, b);
        if dist <= need {
            return Err(CoupleError::NotSpread { a, b, dist, need });
        }
    }
    let counterparts = match cfg.counterparts {
        Some(c) => c,
        None => sample_counterparts(params, cfg)?,
    };
    let state = CoupledState::start(params, t, counterparts);
    let mut sim = CoupledSim::new(params, state, pools);
    let mut trace = Vec::new();
    let (mut coins_pi, mut coins_prime) = (CoinTape::new(), CoinTape::new());
    while sim.state.t < cfg.horizon {
        let s = sim.step();
        if cfg.record_trace {
            coins_pi.push(s.coin_pi);
            coins_prime.push(s.coin_prime);
            trace.push(s);
        }
    }
    let st = &sim.state;
    Ok(CouplingReport {
        tracked: t,
        counterparts,
        tau: sim.tau,
        steps: st.t,
        final_pi: st.pi,
        final_prime: st.prime,
        success: st.phase == 4 && st.pi == st.prime && sim.decoupling.is_none(),
        decoupling: sim.decoupling,
        max_gap: sim.max_gap,
        trace,
        coins_pi,
        coins_prime,
    })
}

/// Positions (i, j, i', j') after each of the five replayed steps, with the
/// starting row first.
pub type WorkedRow = [usize; 4];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("worked example diverged at step {step}: got {got:?}, expected {expected:?}")]
pub struct WorkedExampleMismatch {
    pub step: usize,
    pub got: WorkedRow,
    pub expected: WorkedRow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkedExample {
    pub rows: Vec<WorkedRow>,
    pub steps: Vec<CoupledStep>,
}

/// The expected table for cut `m`.
pub fn worked_example_expected(m: usize) -> [WorkedRow; 6] {
    [
        [m + 100, m, m + 100, m - 3],
        [m + 101, m + 1, m + 100, m - 2],
        [m + 101, m + 1, m + 101, m - 1],
        [m + 102, m + 2, m + 101, m],
        [m + 102, m + 2, m + 102, m + 1],
        [m + 103, m + 3, m + 103, m + 2],
    ]
}

/// Phase 2 with i and i' coupled at m+100, j at m, j' at m−3; the next B^j
/// coin is Tails and S^i continues H, T, H, T. π reads B^j first and then
/// lags π' by one S^i coin until j' reaches m.
pub fn replay_worked_example(params: &ShuffleParams) -> Result<WorkedExample, WorkedExampleMismatch> {
    let (n, m) = (params.n(), params.m());
    assert!(m >= 4 && n >= m + 110, "worked example needs m >= 4 and n >= m + 110");
    use Coin::{Heads as H, Tails as T};
    let mut pools = super::ScriptedPools::new(0)
        .with(PoolLabel::B(Role::J), &[T])
        .with(PoolLabel::S(RoleSet::single(Role::I)), &[H, T, H, T]);
    let far = m + 50;
    let mut state = CoupledState::start(params, [m + 100, m, far], [m + 100, m - 3, far]);
    state.used_pi.clear();
    state.used_prime.clear();
    state.phase = 2;
    let mut sim = CoupledSim { params: *params, state, pools: &mut pools, tau: [Some(0), None, None], decoupling: None, max_gap: 0 };
    let expected = worked_example_expected(m);
    let row = |s: &CoupledState| [s.pi[0], s.pi[1], s.prime[0], s.prime[1]];
    let mut rows = alloc::vec![row(&sim.state)];
    let mut steps = Vec::new();
    for step in 1..=5 {
        steps.push(sim.step());
        let got = row(&sim.state);
        if got != expected[step] {
            return Err(WorkedExampleMismatch { step, got, expected: expected[step] });
        }
        rows.push(got);
    }
    Ok(WorkedExample { rows, steps })
}
