use alloc::vec::Vec;

use super::{Coin, DeckState};
use crate::params::ShuffleParams;

/// Two consecutive steps starting at an even time whose coins differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CollisionEvent {
    pub time: u64,
    /// Cards at positions (m−1, m, n) at `time`, in cycle order.
    pub cards: [usize; 3],
    /// Heads then Tails (the 3-cycle); Tails then Heads is the identity.
    pub realized: bool,
}

impl CollisionEvent {
    pub fn involves(&self, x: usize) -> bool {
        self.cards.contains(&x)
    }

    /// (front, back) seen from participant `x`, in cycle order.
    pub fn partners(&self, x: usize) -> Option<(usize, usize)> {
        let r = self.cards.iter().position(|&c| c == x)?;
        Some((self.cards[(r + 1) % 3], self.cards[(r + 2) % 3]))
    }
}

#[inline]
pub fn is_collision_pair(a: Coin, b: Coin) -> bool {
    a != b
}

/// Every collision in the first `t_max` steps from the identity deck.
pub fn detect_collisions(params: &ShuffleParams, coins: &[Coin], t_max: usize) -> Vec<CollisionEvent> {
    let (n, m) = (params.n(), params.m());
    let t_max = t_max.min(coins.len());
    let mut deck = DeckState::identity(params);
    let mut out = Vec::new();
    let mut t = 0;
    while t + 1 < t_max {
        let (a, b) = (coins[t], coins[t + 1]);
        if is_collision_pair(a, b) {
            let cards = [deck.card_at(m - 1), deck.card_at(m), deck.card_at(n)];
            assert!(cards[0] != cards[1] && cards[1] != cards[2] && cards[0] != cards[2]);
            out.push(CollisionEvent { time: t as u64, cards, realized: a == Coin::Heads });
        }
        deck.step(a);
        deck.step(b);
        t += 2;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchResult {
    pub card: usize,
    pub front: usize,
    pub back: usize,
    pub matched: bool,
    /// Time of the card's first collision in (T, t], if any.
    pub time: Option<u64>,
}

/// Front and back match of `x` for the window (T, t] of a time-sorted event
/// list: x's first collision there counts only if it is also the first one
/// for both partners.
pub fn first_match_after(events: &[CollisionEvent], big_t: u64, t: u64, x: usize) -> MatchResult {
    let window = |e: &&CollisionEvent| e.time > big_t && e.time <= t;
    let none = MatchResult { card: x, front: x, back: x, matched: false, time: None };
    let Some(hit) = events.iter().filter(window).find(|e| e.involves(x)) else {
        return none;
    };
    let (front, back) = hit.partners(x).unwrap();
    let earlier = events
        .iter()
        .filter(window)
        .take_while(|e| e.time < hit.time)
        .any(|e| e.involves(front) || e.involves(back));
    if earlier {
        MatchResult { time: Some(hit.time), ..none }
    } else {
        MatchResult { card: x, front, back, matched: true, time: Some(hit.time) }
    }
}
