use alloc::vec;
use alloc::vec::Vec;

use super::{DistVector, Support};
use crate::params::ShuffleParams;
use crate::KahanSum;
use crate::shuffle::{next_position, Coin};

/// Transition operator of one card's position. Row x has at most two
/// nonzero entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleCardKernel {
    params: ShuffleParams,
}

impl SingleCardKernel {
    pub fn new(params: &ShuffleParams) -> Self {
        Self { params: *params }
    }

    pub fn params(&self) -> &ShuffleParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    /// Nonzero entries of row x (1-based) as (column, weight), merged.
    pub fn row(&self, x: usize) -> Vec<(usize, f64)> {
        let (n, m) = (self.params.n(), self.params.m());
        let h = next_position(n, m, x, Coin::Heads);
        let t = next_position(n, m, x, Coin::Tails);
        if h == t {
            vec![(h, 1.0)]
        } else {
            vec![(h, 0.5), (t, 0.5)]
        }
    }

    /// All nonzeros as 1-based (row, column, weight), row-major.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        (1..=self.n()).flat_map(|x| self.row(x).into_iter().map(move |(y, w)| (x, y, w))).collect()
    }

    /// out = p·P for a row vector p indexed by position − 1.
    pub fn push(&self, p: &[f64], out: &mut [f64]) {
        let (n, m) = (self.params.n(), self.params.m());
        debug_assert_eq!(p.len(), n);
        out[1..m].copy_from_slice(&p[..m - 1]);
        out[0] = 0.5 * (p[m - 1] + p[n - 1]);
        // bottom positions keep half their mass and take half from above
        for x in m..n {
            out[x] = 0.5 * (p[x] + p[x - 1]);
        }
    }

    /// out = P·f for a column vector f indexed by position − 1.
    pub fn pull(&self, f: &[f64], out: &mut [f64]) {
        let (n, m) = (self.params.n(), self.params.m());
        debug_assert_eq!(f.len(), n);
        out[..m - 1].copy_from_slice(&f[1..m]);
        out[m - 1] = 0.5 * (f[0] + f[m]);
        for x in m..n - 1 {
            out[x] = 0.5 * (f[x] + f[x + 1]);
        }
        out[n - 1] = 0.5 * (f[n - 1] + f[0]);
    }

    /// One step of a distribution over positions.
    pub fn apply(&self, d: &DistVector) -> DistVector {
        assert_eq!(d.support(), Support::Positions(self.n()));
        let mut out = vec![0.0; self.n()];
        self.push(d.probs(), &mut out);
        DistVector::from_raw(d.support(), out)
    }
}

fn tv_uniform(p: &[f64]) -> f64 {
    let u = 1.0 / p.len() as f64;
    0.5 * p.iter().map(|x| libm::fabs(x - u)).collect::<KahanSum>().total()
}

/// TV distance to uniform at t = 0, 1, …, horizon.
pub fn tv_profile(kernel: &SingleCardKernel, start: &DistVector, horizon: usize) -> Vec<f64> {
    assert!(horizon >= 1, "horizon must be at least 1");
    assert_eq!(start.support(), Support::Positions(kernel.n()));
    let mut p = start.probs().to_vec();
    let mut q = vec![0.0; p.len()];
    let mut out = Vec::with_capacity(horizon + 1);
    out.push(tv_uniform(&p));
    for _ in 0..horizon {
        kernel.push(&p, &mut q);
        core::mem::swap(&mut p, &mut q);
        out.push(tv_uniform(&p));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("TV still {last_tv} > {delta} after {horizon} steps")]
pub struct HorizonExhausted {
    pub horizon: usize,
    pub delta: f64,
    pub last_tv: f64,
}

/// First t with TV(start·P^t, uniform) ≤ δ, searching up to `max_t`.
pub fn t_single_mix(
    kernel: &SingleCardKernel,
    start: &DistVector,
    delta: f64,
    max_t: usize,
) -> Result<usize, HorizonExhausted> {
    assert_eq!(start.support(), Support::Positions(kernel.n()));
    let n = kernel.n();
    let tv = tv_uniform;
    let mut p = start.probs().to_vec();
    let mut q = vec![0.0; n];
    let mut last = tv(&p);
    if last <= delta {
        return Ok(0);
    }
    for t in 1..=max_t {
        kernel.push(&p, &mut q);
        core::mem::swap(&mut p, &mut q);
        last = tv(&p);
        if last <= delta {
            return Ok(t);
        }
    }
    Err(HorizonExhausted { horizon: max_t, delta, last_tv: last })
}
