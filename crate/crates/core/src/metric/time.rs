use crate::params::ShuffleParams;

/// No time in the window satisfied the congruence. The window always
/// contains one, so this signals a bug.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no t in [{s}, {s} + 4n] satisfies the congruence for n={n} m={m}")]
pub struct SelectorExhausted {
    pub n: usize,
    pub m: usize,
    pub s: u64,
}

fn scan(params: &ShuffleParams, s: u64, residue: impl Fn(i64) -> i64) -> Result<u64, SelectorExhausted> {
    let window = 4 * params.n() as u64;
    (s..=s + window)
        .find(|&t| params.reduce(residue(t as i64)) == 0)
        .ok_or(SelectorExhausted { n: params.n(), m: params.m(), s })
}

/// Smallest t ∈ [s, s+4n] with t − ⌊t/2n⌋(m−1) ≡ 0.
pub fn select_time_t1(params: &ShuffleParams, s: u64) -> Result<u64, SelectorExhausted> {
    let (n2, m) = (2 * params.n() as i64, params.m() as i64);
    scan(params, s, |t| t - (t / n2) * (m - 1))
}

/// Smallest t ∈ [s, s+4n] with t − ⌊t/2n⌋m ≡ 0.
pub fn select_time_t2(params: &ShuffleParams, s: u64) -> Result<u64, SelectorExhausted> {
    let (n2, m) = (2 * params.n() as i64, params.m() as i64);
    scan(params, s, |t| t - (t / n2) * m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        let q = ShuffleParams::new(5, 3).unwrap();
        assert_eq!(select_time_t1(&q, 0), Ok(0));
        assert_eq!(select_time_t1(&q, 1), Ok(8));
        assert_eq!(select_time_t2(&q, 0), Ok(0));
        assert_eq!(select_time_t2(&q, 1), Ok(8));
    }

    proptest! {
        #[test]
        fn within_window_and_minimal(n in 3usize..3000, mf in 0.0f64..1.0, s in 0u64..10_000_000) {
            let m = 2 + (mf * (n - 2) as f64) as usize;
            let m = m.min(n - 1);
            let q = ShuffleParams::new(n, m).unwrap();
            let md = q.modulus();
            let (n2, mi) = (2 * n as i64, m as i64);
            let t1 = select_time_t1(&q, s).unwrap();
            prop_assert!(t1 >= s && t1 <= s + 4 * n as u64);
            prop_assert_eq!((-(t1 as i64) + (t1 as i64 / n2) * (mi - 1)).rem_euclid(md), 0);
            for t in s..t1 {
                prop_assert_ne!((t as i64 - (t as i64 / n2) * (mi - 1)).rem_euclid(md), 0);
            }
            let t2 = select_time_t2(&q, s).unwrap();
            prop_assert!(t2 >= s && t2 <= s + 4 * n as u64);
            prop_assert_eq!((t2 as i64 - (t2 as i64 / n2) * mi).rem_euclid(md), 0);
        }
    }
}
