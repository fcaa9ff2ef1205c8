//! Overlapping cycles shuffle: each step moves the card at position `m` or
//! the card at position `n` to the top of an `n`-card deck, with probability
//! one half each.
//!
//! The crate is `no_std` (with `alloc`). It holds the number-theoretic
//! metric on positions ([`metric`]), the deck dynamics, coin pools and the
//! two-sided coupling ([`shuffle`]), exact chain evolution ([`exact`]) and
//! the Monte-Carlo estimators with their statistics ([`mc`]).
#![no_std]

extern crate alloc;

pub mod exact;
pub mod mc;
pub mod metric;
pub mod params;
pub mod shuffle;

mod kahan;

pub use kahan::KahanSum;
pub use params::{ParamError, ParityClass, ShuffleParams, PHI};
