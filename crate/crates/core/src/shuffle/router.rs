use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{Coin, DeckState, PoolLabel, Pools, Role, RoleSet};
use crate::params::ShuffleParams;

/// Pool for the next step of an uncoupled three-card run: B^x if a tracked
/// card x sits at m, else S^A for the set A of tracked cards in the bottom
/// part, else [`PoolLabel::Free`].
pub fn route_three(params: &ShuffleParams, positions: [usize; 3]) -> PoolLabel {
    let m = params.m();
    if let Some(r) = Role::ALL.into_iter().find(|r| positions[r.index()] == m) {
        return PoolLabel::B(r);
    }
    let mask = bottom_mask(m, positions);
    if mask == 0 {
        PoolLabel::Free
    } else {
        PoolLabel::S(RoleSet::from_mask(mask))
    }
}

#[inline]
pub(crate) fn bottom_mask(m: usize, positions: [usize; 3]) -> u8 {
    Role::ALL.into_iter().filter(|r| positions[r.index()] > m).fold(0, |acc, r| acc | 1 << r.index())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RouteRecord {
    pub step: u64,
    pub label: PoolLabel,
    pub coin: Coin,
    /// Positions of the tracked cards before the step.
    pub positions: [usize; 3],
}

/// Run `t` steps of `deck`, drawing each coin from the pool the tracked
/// cards select.
pub fn route_coins(
    params: &ShuffleParams,
    deck: &mut DeckState,
    tracked: [usize; 3],
    pools: &mut impl Pools,
    t: u64,
) -> Vec<RouteRecord> {
    assert!(tracked[0] != tracked[1] && tracked[1] != tracked[2] && tracked[0] != tracked[2]);
    let mut used: BTreeMap<PoolLabel, u64> = BTreeMap::new();
    let mut out = Vec::with_capacity(t as usize);
    for step in 0..t {
        let positions = tracked.map(|c| deck.position_of(c));
        let label = route_three(params, positions);
        let idx = used.entry(label).or_insert(0);
        let coin = pools.coin(label, *idx);
        *idx += 1;
        deck.step(coin);
        out.push(RouteRecord { step, label, coin, positions });
    }
    out
}
