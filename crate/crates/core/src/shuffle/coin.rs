use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coin {
    Heads,
    Tails,
}

impl Coin {
    #[inline]
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Coin::Heads
        } else {
            Coin::Tails
        }
    }

    #[inline]
    pub fn is_heads(self) -> bool {
        self == Coin::Heads
    }

    pub fn letter(self) -> char {
        match self {
            Coin::Heads => 'H',
            Coin::Tails => 'T',
        }
    }
}

impl fmt::Display for Coin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Coins `bits` of a word, least significant first, as a coin string.
pub fn coins_from_bits(bits: u64, len: usize) -> Vec<Coin> {
    (0..len).map(|r| Coin::from_bit(bits >> r & 1 == 1)).collect()
}

/// One of the three tracked cards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    I,
    J,
    K,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::I, Role::J, Role::K];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        match self {
            Role::I => 'i',
            Role::J => 'j',
            Role::K => 'k',
        }
    }
}

/// A nonempty subset of tracked roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RoleSet(u8);

impl RoleSet {
    pub fn single(r: Role) -> Self {
        RoleSet(1 << r.index())
    }

    pub fn from_mask(mask: u8) -> Self {
        debug_assert!(mask != 0 && mask < 8);
        RoleSet(mask)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn contains(self, r: Role) -> bool {
        self.0 >> r.index() & 1 == 1
    }
}

impl fmt::Display for RoleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in Role::ALL {
            if self.contains(r) {
                write!(f, "{}", r.name())?;
            }
        }
        Ok(())
    }
}

/// Name of a coin pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PoolLabel {
    /// Coins drawn by a tracked card sitting at position m.
    B(Role),
    /// Coins drawn while the given cards are in the bottom part.
    S(RoleSet),
    X(RoleSet),
    Y(RoleSet),
    Z(Role),
    /// Coins no tracked card depends on.
    Free,
}

impl PoolLabel {
    /// Stream id of the pool.
    pub fn key(self) -> u64 {
        match self {
            PoolLabel::B(r) => 1 + r.index() as u64,
            PoolLabel::S(s) => 16 + s.mask() as u64,
            PoolLabel::X(s) => 32 + s.mask() as u64,
            PoolLabel::Y(s) => 48 + s.mask() as u64,
            PoolLabel::Z(r) => 64 + r.index() as u64,
            PoolLabel::Free => 100,
        }
    }
}

impl fmt::Display for PoolLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PoolLabel::B(r) => write!(f, "B^{}", r.name()),
            PoolLabel::S(s) => write!(f, "S^{s}"),
            PoolLabel::X(s) => write!(f, "X^{s}"),
            PoolLabel::Y(s) => write!(f, "Y^{s}"),
            PoolLabel::Z(r) => write!(f, "Z^{}", r.name()),
            PoolLabel::Free => write!(f, "-"),
        }
    }
}

/// Anything that hands out coins one at a time.
pub trait CoinSource {
    fn next_coin(&mut self) -> Coin;
}

impl<I: Iterator<Item = Coin>> CoinSource for I {
    fn next_coin(&mut self) -> Coin {
        self.next().expect("coin sequence exhausted")
    }
}

/// ChaCha8 keyed by `seed` on stream `stream`.
pub fn keyed_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Counter-based coin stream: coin r of stream (seed, label) is fixed, so
/// replays and random access agree.
#[derive(Debug, Clone)]
pub struct CoinStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
    buf: u64,
    left: u32,
    consumed: u64,
}

impl CoinStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream, rng: keyed_rng(seed, stream), buf: 0, left: 0, consumed: 0 }
    }

    pub fn for_pool(seed: u64, label: PoolLabel) -> Self {
        Self::new(seed, label.key())
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn consumed(&self) -> u64 {
        self.consumed
    }

    /// Next 64 coins as a word (bit r is coin r, 1 = Heads); only valid on a
    /// 64-coin boundary.
    #[inline]
    pub fn next_word(&mut self) -> u64 {
        debug_assert_eq!(self.left, 0);
        self.consumed += 64;
        self.rng.next_u64()
    }

    /// Coin r of (seed, stream) without touching any stream state.
    pub fn coin_at(seed: u64, stream: u64, r: u64) -> Coin {
        let mut rng = keyed_rng(seed, stream);
        rng.set_word_pos(u128::from(r / 64) * 2);
        Coin::from_bit(rng.next_u64() >> (r % 64) & 1 == 1)
    }
}

impl CoinSource for CoinStream {
    #[inline]
    fn next_coin(&mut self) -> Coin {
        if self.left == 0 {
            self.buf = self.rng.next_u64();
            self.left = 64;
        }
        let c = Coin::from_bit(self.buf & 1 == 1);
        self.buf >>= 1;
        self.left -= 1;
        self.consumed += 1;
        c
    }
}

/// Coins recorded as a bit vector, readable at any index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoinTape {
    words: Vec<u64>,
    len: u64,
}

impl CoinTape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clear(&mut self) {
        self.words.clear();
        self.len = 0;
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Append 64 coins.
    pub fn push_word(&mut self, w: u64) {
        debug_assert_eq!(self.len % 64, 0);
        self.words.push(w);
        self.len += 64;
    }

    pub fn push(&mut self, c: Coin) {
        let (w, b) = ((self.len / 64) as usize, self.len % 64);
        if w == self.words.len() {
            self.words.push(0);
        }
        if c.is_heads() {
            self.words[w] |= 1 << b;
        }
        self.len += 1;
    }

    #[inline]
    pub fn get(&self, r: u64) -> Coin {
        debug_assert!(r < self.len);
        Coin::from_bit(self.words[(r / 64) as usize] >> (r % 64) & 1 == 1)
    }

    pub fn to_vec(&self) -> Vec<Coin> {
        (0..self.len).map(|r| self.get(r)).collect()
    }
}

/// Source of pool coins by (label, index).
pub trait Pools {
    fn coin(&mut self, label: PoolLabel, index: u64) -> Coin;
}

/// Pools backed by counter-based streams, cached so any index can be
/// revisited cheaply.
#[derive(Debug, Clone)]
pub struct SeededPools {
    seed: u64,
    tapes: BTreeMap<PoolLabel, (CoinStream, CoinTape)>,
}

impl SeededPools {
    pub fn new(seed: u64) -> Self {
        Self { seed, tapes: BTreeMap::new() }
    }
}

impl Pools for SeededPools {
    fn coin(&mut self, label: PoolLabel, index: u64) -> Coin {
        let seed = self.seed;
        let (stream, tape) =
            self.tapes.entry(label).or_insert_with(|| (CoinStream::for_pool(seed, label), CoinTape::new()));
        while tape.len() <= index {
            tape.push_word(stream.next_word());
        }
        tape.get(index)
    }
}

/// Fixed prefixes for chosen pools, seeded coins everywhere else.
#[derive(Debug, Clone)]
pub struct ScriptedPools {
    fixed: BTreeMap<PoolLabel, Vec<Coin>>,
    rest: SeededPools,
}

impl ScriptedPools {
    pub fn new(seed: u64) -> Self {
        Self { fixed: BTreeMap::new(), rest: SeededPools::new(seed) }
    }

    pub fn with(mut self, label: PoolLabel, coins: &[Coin]) -> Self {
        self.fixed.insert(label, coins.to_vec());
        self
    }
}

impl Pools for ScriptedPools {
    fn coin(&mut self, label: PoolLabel, index: u64) -> Coin {
        match self.fixed.get(&label).and_then(|v| v.get(index as usize)) {
            Some(&c) => c,
            None => self.rest.coin(label, index),
        }
    }
}
