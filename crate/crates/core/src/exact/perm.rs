use alloc::vec;
use alloc::vec::Vec;

use super::{entropy_report, DistVector, EntropyReport, Support};
use crate::params::{ParityClass, ShuffleParams};
use crate::KahanSum;

/// Hard cap on the full-deck state space (8! = 40320).
pub const FULL_DECK_CAP: usize = 8;
/// Largest deck run without `allow_large`.
pub const FULL_DECK_DEFAULT_CAP: usize = 7;

const FACT: [usize; 9] = [1, 1, 2, 6, 24, 120, 720, 5040, 40320];

/// Lehmer rank of an arrangement of 0..n (entry k is the card at position
/// k+1, minus one).
pub fn lehmer_rank(arr: &[u8]) -> usize {
    let n = arr.len();
    let mut r = 0;
    for i in 0..n {
        let c = arr[i + 1..].iter().filter(|&&y| y < arr[i]).count();
        r += c * FACT[n - 1 - i];
    }
    r
}

/// Inverse of [`lehmer_rank`]; returns the number of inversions too.
pub fn lehmer_unrank(mut r: usize, n: usize, arr: &mut [u8]) -> usize {
    let mut free: [u8; FULL_DECK_CAP] = [0, 1, 2, 3, 4, 5, 6, 7];
    let mut left = n;
    let mut inv = 0;
    for i in 0..n {
        let f = FACT[n - 1 - i];
        let c = r / f;
        r %= f;
        inv += c;
        arr[i] = free[c];
        free.copy_within(c + 1..left, c);
        left -= 1;
    }
    inv
}

/// Parity (0 even, 1 odd) of the arrangement with the given rank.
pub fn rank_parity(mut r: usize, n: usize) -> usize {
    let mut s = 0;
    for k in (0..n).rev() {
        s += r / FACT[k];
        r %= FACT[k];
    }
    s % 2
}

/// Uniform distribution the full deck is compared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// Every arrangement.
    UniformSn,
    /// Even permutations only.
    UniformEven,
    /// Odd permutations only.
    UniformOdd,
}

impl Target {
    /// Whether an arrangement of the given parity is in the support.
    pub fn contains(self, parity: usize) -> bool {
        match self {
            Target::UniformSn => true,
            Target::UniformEven => parity == 0,
            Target::UniformOdd => parity == 1,
        }
    }

    pub fn size(self, n: usize) -> usize {
        match self {
            Target::UniformSn => FACT[n],
            _ => FACT[n] / 2,
        }
    }
}

/// The coset the walk occupies at time t: A_n when both generators are
/// even, alternating cosets when both are odd, all of S_n otherwise.
pub fn target_at(params: &ShuffleParams, t: usize) -> Target {
    match params.parity_class() {
        ParityClass::Alternating => Target::UniformEven,
        ParityClass::Periodic if t % 2 == 0 => Target::UniformEven,
        ParityClass::Periodic => Target::UniformOdd,
        ParityClass::Full => Target::UniformSn,
    }
}

/// TV distance of a full-deck distribution to a uniform target.
pub fn tv_to_target(dist: &DistVector, target: Target) -> f64 {
    let Support::Perms(n) = dist.support() else { panic!("full-deck distribution expected") };
    let u = 1.0 / target.size(n) as f64;
    let s: KahanSum = dist
        .probs()
        .iter()
        .enumerate()
        .map(|(r, &p)| if target.contains(rank_parity(r, n)) { libm::fabs(p - u) } else { p })
        .collect();
    0.5 * s.total()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExactError {
    #[error("full-deck evolution is limited to n <= {cap}, got n={n}")]
    TooLarge { n: usize, cap: usize },
    #[error("n={n} needs the allow-large flag (default cap {cap})")]
    NeedsAllowLarge { n: usize, cap: usize },
    #[error("TV still {last_tv} > {delta} after {horizon} steps")]
    HorizonExhausted { horizon: usize, delta: f64, last_tv: f64 },
}

/// Step-by-step exact distribution of the deck, starting from the identity.
#[derive(Debug, Clone)]
pub struct FullDeckEvolution {
    params: ShuffleParams,
    t: usize,
    p: Vec<f64>,
    q: Vec<f64>,
}

impl FullDeckEvolution {
    pub fn new(params: &ShuffleParams) -> Result<Self, ExactError> {
        let n = params.n();
        if n > FULL_DECK_CAP {
            return Err(ExactError::TooLarge { n, cap: FULL_DECK_CAP });
        }
        let mut p = vec![0.0; FACT[n]];
        p[0] = 1.0;
        Ok(Self { params: *params, t: 0, q: vec![0.0; FACT[n]], p })
    }

    pub fn time(&self) -> usize {
        self.t
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    pub fn dist(&self) -> DistVector {
        DistVector::from_raw(Support::Perms(self.params.n()), self.p.clone())
    }

    /// Push the distribution one step: each arrangement has two successors.
    pub fn step(&mut self) {
        let (n, m) = (self.params.n(), self.params.m());
        self.q.iter_mut().for_each(|x| *x = 0.0);
        let mut arr = [0u8; FULL_DECK_CAP];
        let mut next = [0u8; FULL_DECK_CAP];
        for (r, &mass) in self.p.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            lehmer_unrank(r, n, &mut arr);
            for cut in [m, n] {
                next[..n].copy_from_slice(&arr[..n]);
                next[..cut].rotate_right(1);
                self.q[lehmer_rank(&next[..n])] += 0.5 * mass;
            }
        }
        core::mem::swap(&mut self.p, &mut self.q);
        self.t += 1;
    }
}

/// Exact distribution of the deck after t steps, n ≤ 8.
pub fn full_deck_dist(params: &ShuffleParams, t: usize) -> Result<DistVector, ExactError> {
    let mut ev = FullDeckEvolution::new(params)?;
    for _ in 0..t {
        ev.step();
    }
    Ok(ev.dist())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixOptions {
    pub allow_large: bool,
    pub max_t: usize,
}

impl Default for MixOptions {
    fn default() -> Self {
        Self { allow_large: false, max_t: 10_000 }
    }
}

/// One recorded time of a full-deck run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixRow {
    pub t: usize,
    pub target: Target,
    /// TV to the coset target at t.
    pub tv: f64,
    /// TV to uniform on all of S_n.
    pub tv_sn: f64,
    pub entropy: EntropyReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixReport {
    pub n: usize,
    pub m: usize,
    pub delta: f64,
    pub t_mix: usize,
    pub profile: Vec<MixRow>,
}

/// First t at which the deck is within δ of its coset target, with the
/// full profile up to that time.
pub fn mixing_time_exact_small(params: &ShuffleParams, delta: f64, opt: &MixOptions) -> Result<MixReport, ExactError> {
    let n = params.n();
    if n > FULL_DECK_CAP {
        return Err(ExactError::TooLarge { n, cap: FULL_DECK_CAP });
    }
    if n > FULL_DECK_DEFAULT_CAP && !opt.allow_large {
        return Err(ExactError::NeedsAllowLarge { n, cap: FULL_DECK_DEFAULT_CAP });
    }
    let mut ev = FullDeckEvolution::new(params)?;
    let mut profile = Vec::new();
    loop {
        let t = ev.time();
        let d = ev.dist();
        let target = target_at(params, t);
        let row = MixRow {
            t,
            target,
            tv: tv_to_target(&d, target),
            tv_sn: tv_to_target(&d, Target::UniformSn),
            entropy: entropy_report(&d, target),
        };
        profile.push(row);
        if row.tv <= delta {
            return Ok(MixReport { n, m: params.m(), delta, t_mix: t, profile });
        }
        if t >= opt.max_t {
            return Err(ExactError::HorizonExhausted { horizon: t, delta, last_tv: row.tv });
        }
        ev.step();
    }
}
