use alloc::string::String;
use alloc::vec::Vec;

use super::l_max;
use crate::params::{ShuffleParams, PHI};
use crate::KahanSum;

const GAP_TOL: f64 = 1e-9;

/// Gap structure of {kφ mod 1 : 0 ≤ k ≤ N} on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenGapReport {
    pub big_n: usize,
    /// Distinct gap lengths, decreasing, with multiplicities.
    pub gaps: Vec<(f64, usize)>,
    /// Exponent z of each distinct gap (gap = φ^z), same order as `gaps`.
    pub exponents: Vec<i32>,
    pub gap_sum: f64,
    pub max_covering_distance: f64,
    /// (1/(2φ²))·1/(N+1).
    pub covering_bound: f64,
    /// Index x of the largest Fibonacci number F_x ≤ N (F_1 = F_2 = 1).
    pub fibonacci_index: u32,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("three-distance check failed for N={}: {reason}", report.big_n)]
pub struct GoldenViolation {
    pub report: GoldenGapReport,
    pub reason: String,
}

pub fn golden_gap_report(big_n: usize) -> Result<GoldenGapReport, GoldenViolation> {
    assert!(big_n >= 1, "N must be positive");
    let mut pts: Vec<f64> = (0..=big_n).map(|k| libm_fract(k as f64 * PHI)).collect();
    pts.sort_unstable_by(f64::total_cmp);
    let mut raw: Vec<f64> = pts.windows(2).map(|w| w[1] - w[0]).collect();
    raw.push(1.0 - pts[big_n]);
    let gap_sum = raw.iter().copied().collect::<KahanSum>().total();
    let widest = raw.iter().copied().fold(0.0, f64::max);

    raw.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut gaps: Vec<(f64, usize)> = Vec::new();
    for g in raw {
        match gaps.last_mut() {
            Some((v, c)) if (*v - g).abs() <= GAP_TOL => *c += 1,
            _ => gaps.push((g, 1)),
        }
    }
    let ln_phi = libm::log(PHI);
    let exponents: Vec<i32> = gaps.iter().map(|&(g, _)| libm::round(libm::log(g) / ln_phi) as i32).collect();

    let report = GoldenGapReport {
        big_n,
        exponents,
        gap_sum,
        max_covering_distance: widest / 2.0,
        covering_bound: 1.0 / (2.0 * PHI * PHI) / (big_n as f64 + 1.0),
        fibonacci_index: fibonacci_index(big_n),
        gaps,
    };

    let fail = |reason: String| Err(GoldenViolation { report: report.clone(), reason });
    if (report.gap_sum - 1.0).abs() > GAP_TOL {
        return fail(alloc::format!("gaps sum to {}", report.gap_sum));
    }
    if report.gaps.len() > 3 {
        return fail(alloc::format!("{} distinct gap lengths", report.gaps.len()));
    }
    for (&(g, _), &z) in report.gaps.iter().zip(&report.exponents) {
        if (g - libm::pow(PHI, z as f64)).abs() > GAP_TOL {
            return fail(alloc::format!("gap {g} is not a power of phi"));
        }
    }
    let zmin = *report.exponents.iter().min().unwrap();
    let zmax = *report.exponents.iter().max().unwrap();
    if zmax - zmin > 2 {
        return fail(alloc::format!("exponents {zmin}..{zmax} span more than three"));
    }
    if report.max_covering_distance > report.covering_bound {
        return fail(alloc::format!(
            "covering distance {} exceeds {}",
            report.max_covering_distance,
            report.covering_bound
        ));
    }
    Ok(report)
}

fn libm_fract(x: f64) -> f64 {
    x - libm::floor(x)
}

fn fibonacci_index(big_n: usize) -> u32 {
    let (mut a, mut b, mut x) = (1usize, 1usize, 2u32);
    while a + b <= big_n {
        (a, b) = (b, a + b);
        x += 1;
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenLmaxCheck {
    pub n: usize,
    pub m: usize,
    pub l_max: f64,
    /// 6n^{3/4}.
    pub bound: f64,
    /// ½n^{3/4}.
    pub lower: f64,
    pub pass: bool,
}

/// Exact ℓ_max at m = ⌊φn⌋ against 6n^{3/4}.
pub fn golden_lmax_check(n: usize) -> Result<GoldenLmaxCheck, crate::ParamError> {
    let q = ShuffleParams::golden(n)?;
    let l = l_max(&q);
    let n34 = libm::pow(n as f64, 0.75);
    Ok(GoldenLmaxCheck { n, m: q.m(), l_max: l, bound: 6.0 * n34, lower: 0.5 * n34, pass: l <= 6.0 * n34 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_multiple() {
        let r = golden_gap_report(1).unwrap();
        assert_eq!(r.gaps.len(), 2);
        assert!((r.gaps[0].0 - PHI).abs() < 1e-12);
        assert!((r.gaps[1].0 - PHI * PHI).abs() < 1e-12);
        assert_eq!(r.exponents, [1, 2]);
    }

    #[test]
    fn two_multiples() {
        let r = golden_gap_report(2).unwrap();
        assert_eq!(r.exponents, [2, 3]);
        assert_eq!(r.gaps[0].1, 2);
        assert_eq!(r.gaps[1].1, 1);
    }

    #[test]
    fn covering_for_three() {
        let r = golden_gap_report(3).unwrap();
        assert!((r.max_covering_distance - 0.190983).abs() < 1e-5);
        assert!((r.covering_bound - 0.327254).abs() < 1e-5);
        // brute grid over x
        let pts: Vec<f64> = (0..=3).map(|k| libm_fract(k as f64 * PHI)).chain([1.0]).collect();
        let grid = (0..=100_000)
            .map(|i| {
                let x = i as f64 / 100_000.0;
                pts.iter().map(|p| (p - x).abs()).fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        assert!((grid - r.max_covering_distance).abs() < 1e-5);
    }

    #[test]
    fn fibonacci_index_values() {
        assert_eq!(fibonacci_index(1), 2);
        assert_eq!(fibonacci_index(2), 3);
        assert_eq!(fibonacci_index(4), 4);
        assert_eq!(fibonacci_index(5), 5);
        assert_eq!(fibonacci_index(8), 6);
    }

    #[test]
    fn lmax_golden() {
        for n in [256, 1024] {
            let c = golden_lmax_check(n).unwrap();
            assert!(c.pass, "{c:?}");
            assert!(c.l_max >= c.lower);
        }
    }
}
