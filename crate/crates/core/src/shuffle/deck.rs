use alloc::vec;
use alloc::vec::Vec;

use super::Coin;
use crate::params::ShuffleParams;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeckError {
    #[error("permutation has length {len}, expected {n}")]
    WrongLength { len: usize, n: usize },
    #[error("not a permutation of 1..=n")]
    NotAPermutation,
}

/// Deck as two rings: positions 1..=m and m+1..=n.
///
/// Heads rotates the top ring; Tails moves the card at m to the front of the
/// bottom ring and the card at n to the front of the top ring. Each card
/// remembers its physical slot, so both lookups and steps are O(1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeckState {
    n: usize,
    m: usize,
    top: Vec<u32>,
    bot: Vec<u32>,
    top_off: usize,
    bot_off: usize,
    /// card → slot; slots below m are in `top`, the rest index `bot` after m.
    slot: Vec<u32>,
}

impl DeckState {
    pub fn identity(params: &ShuffleParams) -> Self {
        let (n, m) = (params.n(), params.m());
        let perm: Vec<usize> = (1..=n).collect();
        Self::build(n, m, &perm)
    }

    /// Deck with `perm[pos - 1]` the card at position `pos`.
    pub fn from_perm(params: &ShuffleParams, perm: &[usize]) -> Result<Self, DeckError> {
        let n = params.n();
        if perm.len() != n {
            return Err(DeckError::WrongLength { len: perm.len(), n });
        }
        let mut seen = vec![false; n + 1];
        for &c in perm {
            if c == 0 || c > n || seen[c] {
                return Err(DeckError::NotAPermutation);
            }
            seen[c] = true;
        }
        Ok(Self::build(n, params.m(), perm))
    }

    fn build(n: usize, m: usize, perm: &[usize]) -> Self {
        let top: Vec<u32> = perm[..m].iter().map(|&c| c as u32).collect();
        let bot: Vec<u32> = perm[m..].iter().map(|&c| c as u32).collect();
        let mut slot = vec![0u32; n + 1];
        for (pos, &c) in perm.iter().enumerate() {
            slot[c] = pos as u32;
        }
        Self { n, m, top, bot, top_off: 0, bot_off: 0, slot }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn card_at(&self, pos: usize) -> usize {
        debug_assert!(pos >= 1 && pos <= self.n);
        if pos <= self.m {
            self.top[(self.top_off + pos - 1) % self.m] as usize
        } else {
            let len = self.n - self.m;
            self.bot[(self.bot_off + pos - self.m - 1) % len] as usize
        }
    }

    #[inline]
    pub fn position_of(&self, card: usize) -> usize {
        let s = self.slot[card] as usize;
        if s < self.m {
            (s + self.m - self.top_off) % self.m + 1
        } else {
            let len = self.n - self.m;
            (s - self.m + len - self.bot_off) % len + self.m + 1
        }
    }

    #[inline]
    pub fn step(&mut self, coin: Coin) {
        let m = self.m;
        let last_top = (self.top_off + m - 1) % m;
        self.top_off = last_top;
        if coin == Coin::Tails {
            let len = self.n - m;
            let last_bot = (self.bot_off + len - 1) % len;
            self.bot_off = last_bot;
            let x = self.top[last_top];
            let y = self.bot[last_bot];
            self.top[last_top] = y;
            self.bot[last_bot] = x;
            self.slot[y as usize] = last_top as u32;
            self.slot[x as usize] = (m + last_bot) as u32;
        }
        #[cfg(debug_assertions)]
        self.assert_consistent();
    }

    /// Position → card, as a vector indexed by position − 1.
    pub fn perm(&self) -> Vec<usize> {
        (1..=self.n).map(|p| self.card_at(p)).collect()
    }

    /// Card → position, as a vector indexed by card − 1.
    pub fn inverse(&self) -> Vec<usize> {
        (1..=self.n).map(|c| self.position_of(c)).collect()
    }

    /// +1 for even permutations, −1 for odd.
    pub fn sign(&self) -> i8 {
        perm_sign(&self.perm())
    }

    pub fn assert_consistent(&self) {
        for pos in 1..=self.n {
            assert_eq!(self.position_of(self.card_at(pos)), pos, "deck maps disagree at position {pos}");
        }
    }
}

/// Sign of a permutation of 1..=n given as a vector.
pub fn perm_sign(perm: &[usize]) -> i8 {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut transpositions = 0;
    for start in 0..n {
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x] - 1;
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    if transpositions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Plain vector deck with O(n) steps; the oracle for [`DeckState`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceDeck {
    m: usize,
    cards: Vec<usize>,
}

impl ReferenceDeck {
    pub fn identity(params: &ShuffleParams) -> Self {
        Self { m: params.m(), cards: (1..=params.n()).collect() }
    }

    pub fn step(&mut self, coin: Coin) {
        let from = match coin {
            Coin::Heads => self.m - 1,
            Coin::Tails => self.cards.len() - 1,
        };
        let c = self.cards.remove(from);
        self.cards.insert(0, c);
    }

    pub fn perm(&self) -> &[usize] {
        &self.cards
    }
}
