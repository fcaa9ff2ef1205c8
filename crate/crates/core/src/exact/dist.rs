use alloc::vec;
use alloc::vec::Vec;

use crate::KahanSum;

/// What the entries of a [`DistVector`] index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// Positions 1..=n, entry x−1.
    Positions(usize),
    /// Arrangements of n cards, entry = Lehmer rank.
    Perms(usize),
}

impl Support {
    pub fn len(self) -> usize {
        match self {
            Support::Positions(n) => n,
            Support::Perms(n) => (1..=n).product(),
        }
    }

    pub fn is_empty(self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DistError {
    #[error("expected {expected} entries, got {got}")]
    Length { expected: usize, got: usize },
    #[error("entry {index} is negative ({value})")]
    Negative { index: usize, value: f64 },
    #[error("total mass {0} is not 1")]
    Mass(f64),
}

/// A probability vector over positions or arrangements.
#[derive(Debug, Clone, PartialEq)]
pub struct DistVector {
    support: Support,
    probs: Vec<f64>,
}

impl DistVector {
    pub const MASS_TOL: f64 = 1e-12;
    pub const NEG_TOL: f64 = 1e-15;

    pub fn new(support: Support, probs: Vec<f64>) -> Result<Self, DistError> {
        let d = Self { support, probs };
        d.validate()?;
        Ok(d)
    }

    pub fn point_mass(support: Support, index: usize) -> Self {
        let mut probs = vec![0.0; support.len()];
        probs[index] = 1.0;
        Self { support, probs }
    }

    pub fn uniform(support: Support) -> Self {
        let k = support.len();
        Self { support, probs: vec![1.0 / k as f64; k] }
    }

    pub(crate) fn from_raw(support: Support, probs: Vec<f64>) -> Self {
        debug_assert_eq!(probs.len(), support.len());
        Self { support, probs }
    }

    pub fn validate(&self) -> Result<(), DistError> {
        if self.probs.len() != self.support.len() {
            return Err(DistError::Length { expected: self.support.len(), got: self.probs.len() });
        }
        if let Some((index, &value)) = self.probs.iter().enumerate().find(|(_, &p)| p < -Self::NEG_TOL) {
            return Err(DistError::Negative { index, value });
        }
        let mass = self.mass();
        if libm::fabs(mass - 1.0) > Self::MASS_TOL {
            return Err(DistError::Mass(mass));
        }
        Ok(())
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    pub fn mass(&self) -> f64 {
        self.probs.iter().copied().collect::<KahanSum>().total()
    }

    /// Total-variation distance; panics on mismatched supports.
    pub fn tv(&self, other: &DistVector) -> f64 {
        assert_eq!(self.support, other.support);
        0.5 * self.probs.iter().zip(&other.probs).map(|(a, b)| libm::fabs(a - b)).collect::<KahanSum>().total()
    }

    /// Total-variation distance to the uniform distribution on the support.
    pub fn tv_to_uniform(&self) -> f64 {
        let u = 1.0 / self.probs.len() as f64;
        0.5 * self.probs.iter().map(|p| libm::fabs(p - u)).collect::<KahanSum>().total()
    }
}
