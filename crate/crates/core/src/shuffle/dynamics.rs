use super::{Coin, DeckState};
use crate::params::ShuffleParams;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShuffleError {
    #[error("need {needed} coins, got {got}")]
    InsufficientCoins { needed: usize, got: usize },
}

/// Where the card at `pos` goes after one step.
#[inline(always)]
pub fn next_position(n: usize, m: usize, pos: usize, coin: Coin) -> usize {
    if pos < m {
        pos + 1
    } else if pos == m {
        match coin {
            Coin::Heads => 1,
            Coin::Tails => m + 1,
        }
    } else {
        match coin {
            Coin::Heads => pos,
            Coin::Tails => {
                if pos == n {
                    1
                } else {
                    pos + 1
                }
            }
        }
    }
}

/// Where the card now at `pos` was one step earlier, given that step's coin.
/// Read forward, this is one step of the inverse shuffle.
#[inline(always)]
pub fn prev_position(n: usize, m: usize, pos: usize, coin: Coin) -> usize {
    match coin {
        Coin::Heads => {
            if pos == 1 {
                m
            } else if pos <= m {
                pos - 1
            } else {
                pos
            }
        }
        Coin::Tails => {
            if pos == 1 {
                n
            } else {
                pos - 1
            }
        }
    }
}

/// Apply one step to a deck.
pub fn step(deck: &mut DeckState, coin: Coin) {
    deck.step(coin);
}

/// Deck after `t` steps from the identity.
pub fn run(params: &ShuffleParams, coins: &[Coin], t: usize) -> Result<DeckState, ShuffleError> {
    if coins.len() < t {
        return Err(ShuffleError::InsufficientCoins { needed: t, got: coins.len() });
    }
    let mut d = DeckState::identity(params);
    for &c in &coins[..t] {
        d.step(c);
    }
    Ok(d)
}

/// The inverse permutation of [`run`]: position ↔ card swapped.
pub fn run_inverse(params: &ShuffleParams, coins: &[Coin], t: usize) -> Result<DeckState, ShuffleError> {
    let d = run(params, coins, t)?;
    Ok(DeckState::from_perm(params, &d.inverse()).expect("inverse of a deck is a deck"))
}
