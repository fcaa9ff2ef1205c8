use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::shuffle::keyed_rng;
use crate::KahanSum;

// ---------------------------------------------------------------------------
// Conditioning a near-uniform measure, and the TV lower bound.

/// A case on which a checked inequality fails.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiUniformCounterexample {
    /// "conditioning", "tv_bound" or "reduction".
    pub statement: &'static str,
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
    /// Indices of the conditioning event, if any.
    pub event: Vec<usize>,
    /// (𝒟) or (a, b, ε, δ) depending on the statement.
    pub constants: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiUniformReport {
    /// Cases checked for the conditioning statement.
    pub conditioning_cases: u64,
    /// Cases checked for TV ≥ (1−ε)(1−δ)(a−b).
    pub tv_bound_cases: u64,
    /// First failure of TV ≥ (1−ε)(1−δ)(a−b), if any.
    pub tv_bound_counterexample: Option<QuasiUniformCounterexample>,
    /// Failures of the weaker TV ≥ (1−ε−δ)⁺(a−b) (should be none).
    pub tv_weak_failures: u64,
    /// Cases checked for the reduction of the conditioning statement to
    /// the TV bound (ε = 0, a = 1/𝒟, b = 1/(2𝒟)).
    pub reduction_cases: u64,
    /// First failure of the conditioning statement, if any.
    pub conditioning_counterexample: Option<QuasiUniformCounterexample>,
    pub reduction_counterexample: Option<QuasiUniformCounterexample>,
}

impl QuasiUniformReport {
    pub fn conditioning_pass(&self) -> bool {
        self.conditioning_counterexample.is_none() && self.reduction_counterexample.is_none()
    }

    pub fn tv_bound_pass(&self) -> bool {
        self.tv_bound_counterexample.is_none()
    }
}

const EPS: f64 = 1e-12;

fn random_measure(rng: &mut impl Rng, k: usize, floor: f64) -> Vec<f64> {
    // half the time a coarse grid of weights, otherwise continuous
    let grid = rng.random::<bool>();
    let mut w: Vec<f64> =
        (0..k).map(|_| if grid { rng.random_range(0..5) as f64 } else { -libm::log(1.0 - rng.random::<f64>()) }).collect();
    let s: f64 = w.iter().sum();
    if s == 0.0 {
        w.iter_mut().for_each(|x| *x = 1.0);
    }
    let s: f64 = w.iter().sum();
    let free = 1.0 - floor * k as f64;
    w.iter().map(|x| floor + free * x / s).collect()
}

fn tv(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| libm::fabs(x - y)).collect::<KahanSum>().total()
}

/// Randomised and grid search over measures on at most 12 points.
///
/// Conditioning statement: if μ ≥ 1/(𝒟|Ω|) pointwise and μ(E) ≥ 1 − 1/(8𝒟),
/// then at least ¾|Ω| points have μ(·|E) > 1/(2𝒟|Ω|).
///
/// TV bound: if μ ≥ a/|Ω| on a (1−ε) fraction and ν ≤ b/|Ω| on a (1−δ)
/// fraction, then ‖μ − ν‖ ≥ (1−ε)(1−δ)(a−b). Each case uses the smallest
/// admissible ε, δ for its (μ, ν, a, b).
pub fn appendix_quasi_uniform_check(cases: u64, seed: u64) -> QuasiUniformReport {
    let mut rng = keyed_rng(seed, 0xA99E);
    let mut rep = QuasiUniformReport {
        conditioning_cases: 0,
        tv_bound_cases: 0,
        tv_bound_counterexample: None,
        tv_weak_failures: 0,
        reduction_cases: 0,
        conditioning_counterexample: None,
        reduction_counterexample: None,
    };
    for _ in 0..cases {
        let k = rng.random_range(1..=12usize);
        let kf = k as f64;

        // conditioning
        let d = if rng.random::<bool>() { rng.random_range(1..=8) as f64 } else { 1.0 + 9.0 * rng.random::<f64>() };
        let mu = random_measure(&mut rng, k, 1.0 / (d * kf));
        let mut order: Vec<usize> = (0..k).collect();
        order.shuffle(&mut rng);
        let mut event = vec![true; k];
        let mut mass = 1.0;
        let stop = rng.random_range(0..=k);
        for &x in order.iter().take(stop) {
            if mass - mu[x] >= 1.0 - 1.0 / (8.0 * d) - EPS {
                event[x] = false;
                mass -= mu[x];
            }
        }
        let cond: Vec<f64> = (0..k).map(|x| if event[x] { mu[x] / mass } else { 0.0 }).collect();
        let good = cond.iter().filter(|&&p| p > 1.0 / (2.0 * d * kf) + EPS).count() as f64;
        rep.conditioning_cases += 1;
        if good < 0.75 * kf - EPS && rep.conditioning_counterexample.is_none() {
            rep.conditioning_counterexample = Some(QuasiUniformCounterexample {
                statement: "conditioning",
                mu: mu.clone(),
                nu: cond.clone(),
                event: (0..k).filter(|&x| event[x]).collect(),
                constants: vec![d],
                lhs: good,
                rhs: 0.75 * kf,
            });
        }

        // the same case through the TV bound: ε = 0, a = 1/𝒟, b = 1/(2𝒟)
        let (a, b) = (1.0 / d, 1.0 / (2.0 * d));
        let low = cond.iter().filter(|&&p| p <= b / kf + EPS).count() as f64 / kf;
        let dist = tv(&mu, &cond);
        rep.reduction_cases += 1;
        // ‖μ − μ(·|E)‖ ≤ 1/(8𝒟) and ‖μ − ν‖ ≥ low·(a − b) force low ≤ ¼
        let ok = dist <= 1.0 / (8.0 * d) + EPS && dist >= low * (a - b) - EPS && low <= 0.25 + EPS;
        if !ok && rep.reduction_counterexample.is_none() {
            rep.reduction_counterexample = Some(QuasiUniformCounterexample {
                statement: "reduction",
                mu: mu.clone(),
                nu: cond,
                event: (0..k).filter(|&x| event[x]).collect(),
                constants: vec![a, b, 0.0, 1.0 - low],
                lhs: dist,
                rhs: low * (a - b),
            });
        }

        // general TV bound on an unrelated pair
        let mu = random_measure(&mut rng, k, 0.0);
        let nu = random_measure(&mut rng, k, 0.0);
        let a = rng.random::<f64>();
        let b = rng.random::<f64>() * a;
        let s = mu.iter().filter(|&&p| p >= a / kf - EPS).count() as f64 / kf;
        let t = nu.iter().filter(|&&p| p <= b / kf + EPS).count() as f64 / kf;
        let (eps, delta) = (1.0 - s, 1.0 - t);
        let dist = tv(&mu, &nu);
        let rhs = (1.0 - eps) * (1.0 - delta) * (a - b);
        rep.tv_bound_cases += 1;
        if dist < rhs - EPS && rep.tv_bound_counterexample.is_none() {
            rep.tv_bound_counterexample = Some(QuasiUniformCounterexample {
                statement: "tv_bound",
                mu: mu.clone(),
                nu: nu.clone(),
                event: Vec::new(),
                constants: vec![a, b, eps, delta],
                lhs: dist,
                rhs,
            });
        }
        if dist < (1.0 - eps - delta).max(0.0) * (a - b) - EPS {
            rep.tv_weak_failures += 1;
        }
    }
    rep
}

// ---------------------------------------------------------------------------
// Binomial tails and maxima of the simple random walk.

/// log P(X ≥ r) for X ~ Bin(n, p), r = 0..=n+1 (the last entry is −∞).
pub fn binomial_log_tail(n: usize, p: f64) -> Vec<f64> {
    assert!(p > 0.0 && p < 1.0);
    let mut lpmf = vec![0.0; n + 1];
    lpmf[0] = n as f64 * libm::log1p(-p);
    let odds = libm::log(p) - libm::log1p(-p);
    for r in 0..n {
        lpmf[r + 1] = lpmf[r] + libm::log((n - r) as f64 / (r + 1) as f64) + odds;
    }
    let mut tail = vec![f64::NEG_INFINITY; n + 2];
    for r in (0..=n).rev() {
        tail[r] = log_add(tail[r + 1], lpmf[r]);
    }
    tail
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + libm::log1p(libm::exp(lo - hi))
}

/// P(max_{s≤t} X_s ≥ k) for the simple walk, by reflection:
/// 2P(X_t > k) + P(X_t = k).
pub fn walk_max_tail(t: usize, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    // X_t = 2R − t with R ~ Bin(t, ½)
    let tail = binomial_log_tail(t, 0.5);
    // X_t ≥ k ⇔ R ≥ ⌈(t+k)/2⌉; X_t > k ⇔ R ≥ ⌊(t+k)/2⌋ + 1
    let at = |r: usize| if r > t { 0.0 } else { libm::exp(tail[r]) };
    let ge = at((t + k).div_ceil(2));
    let gt = at((t + k) / 2 + 1);
    (2.0 * gt + (ge - gt)).min(1.0)
}

/// P(max_{s≤t} |X_s| ≥ k), by evolving the walk killed at ±k.
pub fn walk_abs_max_tail(t: usize, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    // states −(k−1)..=(k−1), index x + k − 1
    let w = 2 * k - 1;
    let mut p = vec![0.0; w];
    let mut q = vec![0.0; w];
    p[k - 1] = 1.0;
    for _ in 0..t {
        q.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..w {
            let v = 0.5 * p[i];
            if v == 0.0 {
                continue;
            }
            if i > 0 {
                q[i - 1] += v;
            }
            if i + 1 < w {
                q[i + 1] += v;
            }
        }
        core::mem::swap(&mut p, &mut q);
    }
    let alive: KahanSum = p.iter().copied().collect();
    (1.0 - alive.total()).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RwBoundKind {
    /// P(X − n/2 ≥ k) ≥ (1/15)·exp(−16k²/n), X ~ Bin(n, ½).
    InverseHoeffding,
    /// P(X − np ≥ k) ≤ exp(−2k²/n).
    Hoeffding,
    /// P(max_{s≤t} |X_s| > a√t) ≤ 4·exp(−a²/2).
    WalkMax,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RwViolation {
    pub kind: RwBoundKind,
    pub n: usize,
    /// k for the binomial bounds; a for the walk maximum.
    pub k: f64,
    pub p: f64,
    pub lhs: f64,
    pub rhs: f64,
}

/// Which grid to sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct RwGrid {
    /// Binomial trials 1..=n_max.
    pub n_max: usize,
    /// Success probabilities for the upper tail bound.
    pub hoeffding_p: Vec<f64>,
    /// Walk lengths and multipliers a for the maximum bound.
    pub walk_t: Vec<usize>,
    pub walk_a: Vec<f64>,
}

impl Default for RwGrid {
    fn default() -> Self {
        Self {
            n_max: 10_000,
            hoeffding_p: vec![0.05, 0.25, 0.5, 0.75],
            walk_t: vec![1, 2, 5, 10, 40, 100, 400, 1000, 2500, 10_000],
            walk_a: (1..=20).map(|i| 0.25 * i as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RwBoundsReport {
    pub inverse_hoeffding_cases: u64,
    pub hoeffding_cases: u64,
    pub walk_max_cases: u64,
    /// Largest lhs/rhs seen for the two upper bounds (≤ 1 means all hold).
    pub worst_upper_ratio: f64,
    pub violations: Vec<RwViolation>,
}

impl RwBoundsReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exact tails against the three bounds on every grid point. The lower
/// bound is checked where its event is nonempty, 0 ≤ k ≤ n/2.
pub fn appendix_rw_bounds_check(grid: &RwGrid) -> RwBoundsReport {
    let mut rep = RwBoundsReport {
        inverse_hoeffding_cases: 0,
        hoeffding_cases: 0,
        walk_max_cases: 0,
        worst_upper_ratio: 0.0,
        violations: Vec::new(),
    };
    // relative slack for rounding in the log-space tails
    let tol = 1e-9;
    for n in 1..=grid.n_max {
        let nf = n as f64;
        let half = binomial_log_tail(n, 0.5);
        for k in 0..=n / 2 {
            // X − n/2 ≥ k ⇔ X ≥ ⌈n/2 + k⌉
            let r = (n + 2 * k).div_ceil(2);
            let lhs = half[r];
            let rhs = libm::log(1.0 / 15.0) - 16.0 * (k * k) as f64 / nf;
            rep.inverse_hoeffding_cases += 1;
            if lhs < rhs - tol {
                rep.violations.push(RwViolation {
                    kind: RwBoundKind::InverseHoeffding,
                    n,
                    k: k as f64,
                    p: 0.5,
                    lhs: libm::exp(lhs),
                    rhs: libm::exp(rhs),
                });
            }
        }
        for &p in &grid.hoeffding_p {
            let tail = if p == 0.5 { half.clone() } else { binomial_log_tail(n, p) };
            for k in 0..=n {
                // X − np ≥ k ⇔ X ≥ ⌈np + k⌉
                let r = libm::ceil(nf * p + k as f64 - 1e-9) as usize;
                let lhs = if r > n { f64::NEG_INFINITY } else { tail[r] };
                let rhs = -2.0 * (k * k) as f64 / nf;
                rep.hoeffding_cases += 1;
                rep.worst_upper_ratio = rep.worst_upper_ratio.max(libm::exp(lhs - rhs));
                if lhs > rhs + tol {
                    rep.violations.push(RwViolation {
                        kind: RwBoundKind::Hoeffding,
                        n,
                        k: k as f64,
                        p,
                        lhs: libm::exp(lhs),
                        rhs: libm::exp(rhs),
                    });
                }
                if lhs == f64::NEG_INFINITY {
                    break;
                }
            }
        }
    }
    for &t in &grid.walk_t {
        for &a in &grid.walk_a {
            // A_t > a√t ⇔ A_t ≥ ⌊a√t⌋ + 1
            let k = libm::floor(a * libm::sqrt(t as f64)) as usize + 1;
            let lhs = walk_abs_max_tail(t, k);
            let rhs = 4.0 * libm::exp(-a * a / 2.0);
            rep.walk_max_cases += 1;
            rep.worst_upper_ratio = rep.worst_upper_ratio.max(lhs / rhs);
            if lhs > rhs * (1.0 + tol) {
                rep.violations.push(RwViolation { kind: RwBoundKind::WalkMax, n: t, k: a, p: 0.5, lhs, rhs });
            }
        }
    }
    rep
}
