//! Position weights, the circular distance and lattice norm on residues
//! mod 2n−m+1, and the quantities derived from them.

use alloc::vec::Vec;

use crate::params::{ParamError, ShuffleParams};

mod golden;
mod ordering;
mod spread;
mod time;

pub use golden::{golden_gap_report, golden_lmax_check, GoldenGapReport, GoldenLmaxCheck, GoldenViolation};
pub use ordering::{monte_ordering, MonteOrdering};
pub use spread::{spread_triple, SpreadError, SpreadMethod, SpreadMode, SpreadTriple};
pub use time::{select_time_t1, select_time_t2, SelectorExhausted};

/// Absolute tolerance when comparing norm values.
pub const NORM_TIE_TOL: f64 = 1e-9;

/// p(x) = x for x ≤ m, 2x − m above.
pub fn position_weight(params: &ShuffleParams, x: usize) -> Result<i64, ParamError> {
    params.check_position(x)?;
    Ok(params.weight(x))
}

/// |ω|_M, the distance from ω to 0 around the residue circle.
#[inline]
pub fn m_distance(params: &ShuffleParams, omega: i64) -> i64 {
    params.centered(omega).abs()
}

/// Witness (a, b) with ω ≡ a + b·m and minimal |a| + |b|·√n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormDecomposition {
    pub a: i64,
    pub b: i64,
    pub value: f64,
}

/// Largest |b| the norm search needs: b = 0 already costs at most 2n.
#[inline]
pub fn norm_b_bound(params: &ShuffleParams) -> i64 {
    libm::ceil(2.0 * params.sqrt_n()) as i64
}

/// ‖ω‖ with its witness. Ties within [`NORM_TIE_TOL`] keep the smaller |b|.
pub fn norm(params: &ShuffleParams, omega: i64) -> NormDecomposition {
    let sqrt_n = params.sqrt_n();
    let m = params.m() as i64;
    let bmax = norm_b_bound(params);
    let a0 = params.centered(omega);
    let mut best = NormDecomposition { a: a0, b: 0, value: a0.abs() as f64 };
    for k in 1..=bmax {
        for b in [k, -k] {
            let bv = k as f64 * sqrt_n;
            if bv >= best.value - NORM_TIE_TOL {
                return best;
            }
            let a = params.centered(omega - b * m);
            let value = a.abs() as f64 + bv;
            if value < best.value - NORM_TIE_TOL {
                best = NormDecomposition { a, b, value };
            }
        }
    }
    best
}

/// Norms of every residue `0..modulus`, for repeated lookups.
#[derive(Debug, Clone)]
pub struct NormTable {
    params: ShuffleParams,
    values: Vec<f64>,
}

impl NormTable {
    pub fn new(params: &ShuffleParams) -> Self {
        let md = params.modulus();
        let values = (0..md).map(|w| norm(params, w).value).collect();
        Self { params: *params, values }
    }

    #[inline]
    pub fn value(&self, omega: i64) -> f64 {
        self.values[self.params.reduce(omega) as usize]
    }

    /// ‖p(x) − p(y)‖.
    #[inline]
    pub fn between(&self, x: usize, y: usize) -> f64 {
        self.value(self.params.weight(x) - self.params.weight(y))
    }

    /// Largest norm over residues 1..=2n−m, with the first residue attaining it.
    pub fn max(&self) -> (f64, i64) {
        let mut best = (0.0, 1);
        for w in 1..self.params.modulus() {
            let v = self.values[w as usize];
            if v > best.0 + NORM_TIE_TOL {
                best = (v, w);
            }
        }
        best
    }

    pub fn params(&self) -> &ShuffleParams {
        &self.params
    }
}

/// ℓ_max: the largest ‖ω‖ over ω ∈ {1, …, 2n−m}.
pub fn l_max(params: &ShuffleParams) -> f64 {
    l_max_witness(params).0
}

/// ℓ_max together with the first residue attaining it.
pub fn l_max_witness(params: &ShuffleParams) -> (f64, i64) {
    let mut best = (0.0, 1);
    for w in 1..params.modulus() {
        let v = norm(params, w).value;
        if v > best.0 + NORM_TIE_TOL {
            best = (v, w);
        }
    }
    best
}

/// γ(ℓ): number of κ ≥ 0 with |κm|_M < ℓ and κ < ℓ/√n.
pub fn gamma(params: &ShuffleParams, ell: f64) -> usize {
    let kmax = ell / params.sqrt_n();
    let m = params.m() as i64;
    let mut count = 0;
    let mut kappa = 0i64;
    while (kappa as f64) < kmax {
        if (m_distance(params, kappa * m) as f64) < ell {
            count += 1;
        }
        kappa += 1;
    }
    count
}

/// N_ℓ: positions whose weight is a + bm with |a| ≤ ℓ and |b| ≤ ℓ/√n.
pub fn enumerate_n_ell(params: &ShuffleParams, ell: f64) -> Vec<usize> {
    let bmax = libm::floor(ell / params.sqrt_n()) as i64;
    let m = params.m() as i64;
    (1..=params.n())
        .filter(|&x| {
            let w = params.weight(x);
            (-bmax..=bmax).any(|b| m_distance(params, w - b * m) as f64 <= ell)
        })
        .collect()
}

/// The lower bound ℓ²/(2γ√n) on |N_ℓ|.
pub fn n_ell_lower_bound(params: &ShuffleParams, ell: f64) -> f64 {
    ell * ell / (2.0 * gamma(params, ell) as f64 * params.sqrt_n())
}

/// σ: reverses the blocks 1..m and m+1..n.
pub fn sigma_reorder(params: &ShuffleParams, x: usize) -> Result<usize, ParamError> {
    params.check_position(x)?;
    Ok(sigma(params, x))
}

#[inline]
pub(crate) fn sigma(params: &ShuffleParams, x: usize) -> usize {
    let (n, m) = (params.n(), params.m());
    if x <= m {
        m + 1 - x
    } else {
        n + m + 1 - x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: usize, m: usize) -> ShuffleParams {
        ShuffleParams::new(n, m).unwrap()
    }

    /// Scans every |b| ≤ n with no pruning.
    fn slow_norm(params: &ShuffleParams, omega: i64) -> f64 {
        let md = params.modulus();
        let m = params.m() as i64;
        let mut best = f64::INFINITY;
        for b in -(params.n() as i64)..=(params.n() as i64) {
            for a in -md..=md {
                if (a + b * m - omega).rem_euclid(md) == 0 {
                    best = best.min(a.abs() as f64 + b.abs() as f64 * params.sqrt_n());
                }
            }
        }
        best
    }

    #[test]
    fn weights() {
        let q = p(10, 4);
        assert_eq!(position_weight(&q, 3).unwrap(), 3);
        assert_eq!(position_weight(&q, 7).unwrap(), 10);
        assert_eq!(position_weight(&q, 10).unwrap(), 16);
        assert!(position_weight(&q, 0).is_err());
        assert!(position_weight(&q, 11).is_err());
    }

    #[test]
    fn distances() {
        let q = p(10, 4);
        assert_eq!(m_distance(&q, 16), 1);
        assert_eq!(m_distance(&q, 8), 8);
        assert_eq!(m_distance(&q, q.weight(10) - q.weight(1)), 2);
        assert_eq!(m_distance(&q, -16), 1);
    }

    #[test]
    fn norm_examples() {
        let q = p(100, 50);
        assert_eq!(norm(&q, 50), NormDecomposition { a: 0, b: 1, value: 10.0 });
        assert_eq!(norm(&q, 1), NormDecomposition { a: 1, b: 0, value: 1.0 });
        assert_eq!(norm(&q, 100), NormDecomposition { a: -1, b: -1, value: 11.0 });
    }

    #[test]
    fn norm_matches_unpruned_search() {
        for (n, m) in [(4, 2), (7, 3), (12, 5), (16, 9), (25, 13), (30, 18)] {
            let q = p(n, m);
            for w in 0..q.modulus() {
                let d = norm(&q, w);
                assert!((d.value - slow_norm(&q, w)).abs() < 1e-9, "n={n} m={m} w={w}");
                assert_eq!((d.a + d.b * m as i64 - w).rem_euclid(q.modulus()), 0);
            }
        }
    }

    #[test]
    fn l_max_small_case() {
        let q = p(4, 2);
        let (v, w) = l_max_witness(&q);
        assert_eq!(v, 3.0);
        assert_eq!(w, 3);
        assert_eq!(norm(&q, 4).value, 3.0);
        let brute = (1..q.modulus()).map(|w| slow_norm(&q, w)).fold(0.0, f64::max);
        assert_eq!(brute, 3.0);
    }

    #[test]
    fn gamma_examples() {
        let q = p(100, 50);
        assert_eq!(gamma(&q, 30.0), 1);
        assert_eq!(gamma(&q, 40.0), 2);
        assert_eq!(gamma(&q, 0.5), 1);
    }

    #[test]
    fn n_ell_examples() {
        let q = p(100, 50);
        let set = enumerate_n_ell(&q, 10.0);
        assert!(set.contains(&50));
        assert!(set.contains(&1));
        assert_eq!(enumerate_n_ell(&q, 400.0).len(), 100);
    }

    #[test]
    fn sigma_examples() {
        let q = p(5, 3);
        let s: Vec<usize> = (1..=5).map(|x| sigma_reorder(&q, x).unwrap()).collect();
        assert_eq!(s, [3, 2, 1, 5, 4]);
        assert!(sigma_reorder(&q, 6).is_err());
    }

    #[test]
    fn sigma_preserves_norms_exhaustively() {
        for n in 3..=64 {
            for m in 2..n {
                let q = p(n, m);
                let t = NormTable::new(&q);
                for j in 1..=n {
                    for k in 1..=n {
                        let (sj, sk) = (sigma(&q, j), sigma(&q, k));
                        let d = q.weight(k) - q.weight(j);
                        assert_eq!(q.reduce(d), q.reduce(q.weight(sj) - q.weight(sk)));
                        assert_eq!(m_distance(&q, d), m_distance(&q, q.weight(sk) - q.weight(sj)));
                        assert_eq!(t.value(d), t.value(q.weight(sk) - q.weight(sj)));
                    }
                }
            }
        }
    }

    fn params_strategy() -> impl Strategy<Value = ShuffleParams> {
        (3usize..400).prop_flat_map(|n| (Just(n), 2..n)).prop_map(|(n, m)| p(n, m))
    }

    proptest! {
        #[test]
        fn weight_steps_are_one_or_two(q in params_strategy()) {
            for x in 1..q.n() {
                let d = q.weight(x + 1) - q.weight(x);
                prop_assert!(d == 1 || d == 2);
            }
            prop_assert_eq!(q.weight(q.n()), (2 * q.n() - q.m()) as i64);
        }

        #[test]
        fn norm_at_most_distance(q in params_strategy(), w in -5000i64..5000) {
            let d = norm(&q, w);
            prop_assert!(d.value <= m_distance(&q, w) as f64 + 1e-12);
            prop_assert!(d.value <= 2.0 * q.n() as f64);
            prop_assert_eq!((d.a + d.b * q.m() as i64 - w).rem_euclid(q.modulus()), 0);
        }

        #[test]
        fn distance_symmetric(q in params_strategy(), w in -5000i64..5000) {
            let d = m_distance(&q, w);
            prop_assert_eq!(d, m_distance(&q, -w));
            prop_assert!(d >= 0 && d <= q.modulus() / 2);
        }

        #[test]
        fn sigma_involution(q in params_strategy()) {
            for x in 1..=q.n() {
                prop_assert_eq!(sigma(&q, sigma(&q, x)), x);
            }
        }

        #[test]
        fn l_max_bounds(q in params_strategy()) {
            let l = l_max(&q);
            let n = q.n() as f64;
            prop_assert!(l <= 2.0 * n);
            prop_assert!(l >= 0.5 * libm::pow(n, 0.75));
            prop_assert_eq!(l, NormTable::new(&q).max().0);
        }

        #[test]
        fn n_ell_cardinality_bound(q in params_strategy(), frac in 0.0f64..2.0) {
            let ell = 1.0 + frac * l_max(&q);
            prop_assert!(enumerate_n_ell(&q, ell).len() as f64 >= n_ell_lower_bound(&q, ell));
        }

        #[test]
        fn gamma_at_least_one(q in params_strategy(), ell in 0.01f64..800.0) {
            prop_assert!(gamma(&q, ell) >= 1);
        }
    }
}
