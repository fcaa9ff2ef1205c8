use core::fmt;

/// Inverse golden ratio (√5 − 1)/2.
pub const PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParamError {
    #[error("deck size n={0} is too small (need n >= 3)")]
    DeckTooSmall(usize),
    #[error("cut m={m} outside the admissible range 2..={max}")]
    CutOutOfRange { m: usize, max: usize },
    #[error("m/n = {ratio} is not strictly inside ({epsilon}, 1 - {epsilon})")]
    EpsilonViolated { ratio: f64, epsilon: f64 },
    #[error("alpha={0} must lie strictly between 0 and 1")]
    BadAlpha(f64),
    #[error("position {x} outside 1..={n}")]
    PositionOutOfRange { x: usize, n: usize },
}

/// How the sign of the deck evolves, which fixes the uniform target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityClass {
    /// m and n odd: both generators are even, the walk lives on A_n.
    Alternating,
    /// m and n even: both generators are odd, the sign flips every step.
    Periodic,
    /// Mixed parity: converges to uniform on S_n.
    Full,
}

/// Deck size `n` and cut position `m` with 2 ≤ m ≤ n−1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShuffleParams {
    n: usize,
    m: usize,
    epsilon: Option<f64>,
}

impl ShuffleParams {
    pub fn new(n: usize, m: usize) -> Result<Self, ParamError> {
        if n < 3 {
            return Err(ParamError::DeckTooSmall(n));
        }
        if m < 2 || m > n - 1 {
            return Err(ParamError::CutOutOfRange { m, max: n - 1 });
        }
        Ok(Self { n, m, epsilon: None })
    }

    /// Also require `epsilon < m/n < 1 - epsilon`.
    pub fn with_epsilon(n: usize, m: usize, epsilon: f64) -> Result<Self, ParamError> {
        let mut p = Self::new(n, m)?;
        let ratio = m as f64 / n as f64;
        if !(epsilon < ratio && ratio < 1.0 - epsilon) {
            return Err(ParamError::EpsilonViolated { ratio, epsilon });
        }
        p.epsilon = Some(epsilon);
        Ok(p)
    }

    /// m = ⌊αn⌋.
    pub fn from_alpha(n: usize, alpha: f64) -> Result<Self, ParamError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(ParamError::BadAlpha(alpha));
        }
        Self::new(n, libm::floor(alpha * n as f64) as usize)
    }

    /// m = ⌊φn⌋ with φ the inverse golden ratio.
    pub fn golden(n: usize) -> Result<Self, ParamError> {
        Self::from_alpha(n, PHI)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    /// Number of residues 2n − m + 1.
    #[inline]
    pub fn modulus(&self) -> i64 {
        (2 * self.n - self.m + 1) as i64
    }

    pub fn parity_class(&self) -> ParityClass {
        match (self.n % 2, self.m % 2) {
            (1, 1) => ParityClass::Alternating,
            (0, 0) => ParityClass::Periodic,
            _ => ParityClass::Full,
        }
    }

    #[inline]
    pub fn sqrt_n(&self) -> f64 {
        libm::sqrt(self.n as f64)
    }

    /// Unchecked position weight; callers guarantee 1 ≤ x ≤ n.
    #[inline]
    pub fn weight(&self, x: usize) -> i64 {
        debug_assert!(x >= 1 && x <= self.n);
        if x <= self.m {
            x as i64
        } else {
            (2 * x - self.m) as i64
        }
    }

    /// Representative of `omega` in `0..modulus`.
    #[inline]
    pub fn reduce(&self, omega: i64) -> i64 {
        omega.rem_euclid(self.modulus())
    }

    /// Signed representative of `omega` with the smallest absolute value
    /// (the positive one when two tie).
    #[inline]
    pub fn centered(&self, omega: i64) -> i64 {
        let md = self.modulus();
        let r = omega.rem_euclid(md);
        if 2 * r <= md {
            r
        } else {
            r - md
        }
    }

    pub fn check_position(&self, x: usize) -> Result<(), ParamError> {
        if x >= 1 && x <= self.n {
            Ok(())
        } else {
            Err(ParamError::PositionOutOfRange { x, n: self.n })
        }
    }

    /// Position carrying weight `w` (mod the modulus), if any.
    pub fn position_of_weight(&self, w: i64) -> Option<usize> {
        let w = self.reduce(w);
        let m = self.m as i64;
        if w >= 1 && w <= m {
            Some(w as usize)
        } else if w > m && (w - m) % 2 == 0 && w <= 2 * self.n as i64 - m {
            Some(((w + m) / 2) as usize)
        } else {
            None
        }
    }
}

impl fmt::Display for ShuffleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} m={}", self.n, self.m)
    }
}
