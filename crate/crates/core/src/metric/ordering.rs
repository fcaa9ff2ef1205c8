use alloc::vec;
use alloc::vec::Vec;

use super::{l_max, NormTable};
use crate::params::ShuffleParams;

/// Card ranking by distance band: the bottom ⌊√n⌋+1 cards come first
/// (n, n−1, …), then the cards of each band ‖p(i)‖ ≤ 2^k√n not yet ranked.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteOrdering {
    /// `nu[i]` is the rank of card i (index 0 unused).
    pub nu: Vec<usize>,
    /// I_0, I_1, …, I_a; each block lists its cards in rank order.
    pub blocks: Vec<Vec<usize>>,
    /// ℓ_k = 2^k√n for k = 0..=a.
    pub thresholds: Vec<f64>,
}

impl MonteOrdering {
    pub fn rank(&self, card: usize) -> usize {
        self.nu[card]
    }

    /// |J_k|, where J_0 = {n−2, …, n−⌊√n⌋} and J_k (k ≥ 1) holds the cards
    /// with ‖p(i)‖ ≤ 2^k√n.
    pub fn band_size(&self, params: &ShuffleParams, table: &NormTable, k: usize) -> usize {
        if k == 0 {
            return (libm::floor(params.sqrt_n()) as usize).saturating_sub(1);
        }
        let lk = self.thresholds[k];
        (1..=params.n()).filter(|&i| table.value(params.weight(i)) <= lk).count()
    }
}

pub fn monte_ordering(params: &ShuffleParams) -> MonteOrdering {
    let n = params.n();
    let sqrt_n = params.sqrt_n();
    let root = libm::floor(sqrt_n) as usize;
    let table = NormTable::new(params);
    let a = libm::ceil(libm::log2(l_max(params)) - 0.5 * libm::log2(n as f64)).max(1.0) as usize;
    let thresholds: Vec<f64> = (0..=a).map(|k| libm::ldexp(sqrt_n, k as i32)).collect();

    let mut nu = vec![0usize; n + 1];
    let mut next = 1;
    let mut blocks = Vec::with_capacity(a + 1);

    let first: Vec<usize> = (0..=root.min(n - 1)).map(|s| n - s).collect();
    for &c in &first {
        nu[c] = next;
        next += 1;
    }
    blocks.push(first);

    for (k, &lk) in thresholds.iter().enumerate().skip(1) {
        let last = k == a;
        let block: Vec<usize> = (1..=n)
            .rev()
            .filter(|&i| nu[i] == 0 && (last || table.value(params.weight(i)) <= lk))
            .collect();
        for &c in &block {
            nu[c] = next;
            next += 1;
        }
        blocks.push(block);
    }
    debug_assert_eq!(next, n + 1);
    MonteOrdering { nu, blocks, thresholds }
}
