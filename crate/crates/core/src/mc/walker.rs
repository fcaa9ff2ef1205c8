use rand::RngCore;
use rand_chacha::ChaCha8Rng;

use crate::shuffle::{keyed_rng, next_position, prev_position, Coin, CoinTape};

/// Forward shuffle or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Positions of up to three cards driven by one coin stream. Stretches of
/// steps where no card can branch are taken 64 coins at a time.
#[derive(Debug, Clone)]
pub struct Walker {
    n: usize,
    m: usize,
    dir: Direction,
    pos: [usize; 3],
    len: usize,
    t: u64,
    rng: ChaCha8Rng,
    word: u64,
    left: u32,
    tape: Option<CoinTape>,
}

impl Walker {
    pub fn new(n: usize, m: usize, dir: Direction, positions: &[usize], seed: u64, stream: u64) -> Self {
        assert!(!positions.is_empty() && positions.len() <= 3);
        let mut pos = [0; 3];
        pos[..positions.len()].copy_from_slice(positions);
        Self {
            n,
            m,
            dir,
            pos,
            len: positions.len(),
            t: 0,
            rng: keyed_rng(seed, stream),
            word: 0,
            left: 0,
            tape: None,
        }
    }

    /// Keep every coin drawn, for later backtracking.
    pub fn record(mut self) -> Self {
        self.tape = Some(CoinTape::new());
        self
    }

    pub fn tape(&self) -> Option<&CoinTape> {
        self.tape.as_ref()
    }

    pub fn time(&self) -> u64 {
        self.t
    }

    pub fn positions(&self) -> &[usize] {
        &self.pos[..self.len]
    }

    #[inline]
    fn refill(&mut self) {
        if self.left == 0 {
            self.word = self.rng.next_u64();
            self.left = 64;
        }
    }

    /// Coin of the next step, without consuming it.
    pub fn peek(&mut self) -> Coin {
        self.refill();
        Coin::from_bit(self.word & 1 == 1)
    }

    /// Coins of the next two steps.
    pub fn peek2(&mut self) -> (Coin, Coin) {
        self.refill();
        let a = Coin::from_bit(self.word & 1 == 1);
        if self.left >= 2 {
            return (a, Coin::from_bit(self.word >> 1 & 1 == 1));
        }
        // the second coin is the low bit of the next word: take one step's
        // worth of state by hand
        let saved = self.rng.clone();
        let b = Coin::from_bit(self.rng.next_u64() & 1 == 1);
        self.rng = saved;
        (a, b)
    }

    #[inline]
    fn take(&mut self, k: u32) -> u64 {
        debug_assert!(k >= 1 && k <= self.left);
        let bits = if k == 64 { self.word } else { self.word & ((1u64 << k) - 1) };
        if let Some(tape) = self.tape.as_mut() {
            for r in 0..k {
                tape.push(Coin::from_bit(bits >> r & 1 == 1));
            }
        }
        self.word = if k == 64 { 0 } else { self.word >> k };
        self.left -= k;
        self.t += u64::from(k);
        bits
    }

    /// One step.
    pub fn step(&mut self) -> Coin {
        self.refill();
        let c = Coin::from_bit(self.take(1) == 1);
        let (n, m) = (self.n, self.m);
        for p in &mut self.pos[..self.len] {
            *p = match self.dir {
                Direction::Forward => next_position(n, m, *p, c),
                Direction::Inverse => prev_position(n, m, *p, c),
            };
        }
        c
    }

    /// Largest chunk (≤ coins left in the word, ≤ `cap`) over which every
    /// card moves without branching and, if `guard`, without entering the
    /// collision positions m−1, m, n. Returns 0 if none.
    fn chunk(&self, cap: u64, guard: bool) -> u32 {
        let (n, m) = (self.n, self.m);
        let mut w = u64::from(self.left).min(cap);
        let mut bottom = [0usize; 3];
        let mut nb = 0;
        for &p in &self.pos[..self.len] {
            match self.dir {
                Direction::Forward => {
                    if p < m {
                        let stop = if guard { m.saturating_sub(2) } else { m };
                        w = w.min(stop.saturating_sub(p) as u64);
                    } else if p == m {
                        return 0;
                    } else {
                        bottom[nb] = p;
                        nb += 1;
                    }
                }
                Direction::Inverse => {
                    if p == 1 {
                        return 0;
                    } else if p <= m {
                        w = w.min((p - 1) as u64);
                    } else {
                        bottom[nb] = p;
                        nb += 1;
                    }
                }
            }
        }
        if w == 0 || nb == 0 {
            return w as u32;
        }
        // bottom cards move on Tails only; shrink w until none overruns
        let room = bottom[..nb]
            .iter()
            .map(|&p| match self.dir {
                Direction::Forward => (if guard { n - 1 } else { n }).saturating_sub(p),
                Direction::Inverse => p - (m + 1),
            })
            .min()
            .unwrap();
        let tails = |k: u64| {
            let mask = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
            (!self.word & mask).count_ones() as usize
        };
        if tails(w) <= room {
            return w as u32;
        }
        if room == 0 {
            return 0;
        }
        // largest k with tails(k) ≤ room: position of the (room+1)-th Tails
        let mut k = 0;
        let mut seen = 0;
        while k < w {
            if self.word >> k & 1 == 0 {
                seen += 1;
                if seen > room {
                    break;
                }
            }
            k += 1;
        }
        k as u32
    }

    fn bulk(&mut self, k: u32) {
        let bits = self.take(k);
        let tails = k - bits.count_ones();
        for p in &mut self.pos[..self.len] {
            let top = match self.dir {
                Direction::Forward => *p < self.m,
                Direction::Inverse => *p <= self.m,
            };
            let d = if top { k as usize } else { tails as usize };
            match self.dir {
                Direction::Forward => *p += d,
                Direction::Inverse => *p -= d,
            }
        }
    }

    /// Run to time `until` (no-op if already there).
    pub fn advance_to(&mut self, until: u64) {
        while self.t < until {
            self.refill();
            match self.chunk(until - self.t, false) {
                0 => {
                    self.step();
                }
                k => self.bulk(k),
            }
        }
    }

    /// Whether any card is at m−1, m or n.
    pub fn exposed(&self) -> bool {
        let (n, m) = (self.n, self.m);
        self.pos[..self.len].iter().any(|&p| p == m - 1 || p == m || p == n)
    }

    /// Advance to the next even time ≤ `until` at which some card sits at a
    /// collision position, returning that time; `None` if there is none.
    pub fn next_exposure(&mut self, until: u64) -> Option<u64> {
        debug_assert_eq!(self.dir, Direction::Forward);
        loop {
            let exposed = self.exposed();
            if exposed && self.t % 2 == 0 {
                return (self.t <= until).then_some(self.t);
            }
            if self.t >= until {
                return None;
            }
            if exposed {
                self.step();
                continue;
            }
            // guarded chunks never enter m−1, m or n
            self.refill();
            match self.chunk(until - self.t, true) {
                0 => {
                    self.step();
                }
                k => self.bulk(k),
            }
        }
    }
}
