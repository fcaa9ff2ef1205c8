use core::ops::Range;

use rand::Rng;

use crate::shuffle::keyed_rng;

/// 97.5% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Bernoulli trial count with a Wilson 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub ci95: (f64, f64),
}

impl Estimate {
    pub fn new(successes: u64, trials: u64) -> Self {
        assert!(successes <= trials);
        let p_hat = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        Self { trials, successes, p_hat, ci95: wilson(successes, trials, Z95) }
    }

    pub fn empty() -> Self {
        Self::new(0, 0)
    }

    /// Pool two disjoint batches.
    pub fn merge(self, other: Estimate) -> Estimate {
        Estimate::new(self.successes + other.successes, self.trials + other.trials)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci95.1 - self.ci95.0)
    }

    pub fn overlaps(&self, other: &Estimate) -> bool {
        self.ci95.0 <= other.ci95.1 && other.ci95.0 <= self.ci95.1
    }
}

/// Wilson score interval for `s` successes in `n` trials.
pub fn wilson(s: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = s as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z * libm::sqrt(p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)) / denom;
    let lo = if s == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if s == n { 1.0 } else { (centre + half).min(1.0) };
    (lo.min(p), hi.max(p))
}

/// One Monte-Carlo experiment: a deterministic function of (seed, trial
/// index) to success or failure.
pub trait Experiment: Sync {
    fn name(&self) -> &'static str;
    fn trial(&self, seed: u64, index: u64) -> bool;
}

/// Run trials `range` of an experiment. Any split of the index range gives
/// the same pooled result.
pub fn run_trials<E: Experiment + ?Sized>(exp: &E, seed: u64, range: Range<u64>) -> Estimate {
    let trials = range.end - range.start;
    let successes = range.filter(|&i| exp.trial(seed, i)).count() as u64;
    Estimate::new(successes, trials)
}

/// Fraction of `replicates` Wilson intervals (each from `trials`
/// Bernoulli(p) draws) that contain p.
pub fn wilson_coverage(p: f64, trials: u64, replicates: u64, seed: u64) -> f64 {
    let mut rng = keyed_rng(seed, 0xC0FE);
    let mut hit = 0;
    for _ in 0..replicates {
        let s = (0..trials).filter(|_| rng.random::<f64>() < p).count() as u64;
        let (lo, hi) = wilson(s, trials, Z95);
        if lo <= p && p <= hi {
            hit += 1;
        }
    }
    hit as f64 / replicates as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_contains_estimate() {
        for (s, n) in [(0, 10), (10, 10), (3, 10), (1, 1_000_000), (500, 1000)] {
            let e = Estimate::new(s, n);
            assert!(e.ci95.0 <= e.p_hat && e.p_hat <= e.ci95.1);
            assert!(e.ci95.0 >= 0.0 && e.ci95.1 <= 1.0);
        }
    }

    #[test]
    fn known_wilson_values() {
        // 5/10: centre 0.5, half-width 0.2634 (textbook value)
        let (lo, hi) = wilson(5, 10, Z95);
        assert!((lo - 0.2366).abs() < 1e-4 && (hi - 0.7634).abs() < 1e-4);
        // 0/20 upper limit z²/(n+z²)
        let (_, hi) = wilson(0, 20, Z95);
        assert!((hi - Z95 * Z95 / (20.0 + Z95 * Z95)).abs() < 1e-12);
    }

    #[test]
    fn nominal_coverage() {
        for p in [0.05, 0.3, 0.5] {
            let c = wilson_coverage(p, 400, 10_000, 11);
            assert!((0.93..=0.97).contains(&c), "p={p} coverage {c}");
        }
    }

    struct Coin;
    impl Experiment for Coin {
        fn name(&self) -> &'static str {
            "coin"
        }
        fn trial(&self, seed: u64, index: u64) -> bool {
            keyed_rng(seed, index).random::<bool>()
        }
    }

    #[test]
    fn sharding_is_invisible() {
        let whole = run_trials(&Coin, 5, 0..1000);
        let parts = [0..137, 137..500, 500..999, 999..1000]
            .into_iter()
            .map(|r| run_trials(&Coin, 5, r))
            .fold(Estimate::empty(), Estimate::merge);
        assert_eq!(whole, parts);
    }
}
