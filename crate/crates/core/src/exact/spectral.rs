use alloc::vec::Vec;

use nalgebra::{ComplexField, DMatrix};
use rand::Rng;

use super::SingleCardKernel;
use crate::shuffle::keyed_rng;

/// Largest deck for the dense eigensolve.
pub const DENSE_CAP: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelaxationMethod {
    Dense,
    Iterative,
}

/// Second-largest eigenvalue modulus and the resulting relaxation time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Relaxation {
    pub lambda2: f64,
    pub gap: f64,
    /// 1 / gap.
    pub time: f64,
    pub method: RelaxationMethod,
    /// ‖PQ − QH‖_F of the final Ritz subspace; 0 for the dense path.
    pub residual: f64,
    pub iterations: usize,
}

impl Relaxation {
    fn from_lambda(lambda2: f64, method: RelaxationMethod, residual: f64, iterations: usize) -> Self {
        let gap = 1.0 - lambda2;
        Self { lambda2, gap, time: 1.0 / gap, method, residual, iterations }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RelaxationError {
    #[error("dense eigensolve capped at n={cap}, got n={n}")]
    TooLarge { n: usize, cap: usize },
    #[error("no convergence after {iterations} iterations: |λ₂| ≈ {estimate}, residual {residual}")]
    NotConverged { estimate: f64, residual: f64, iterations: usize },
}

/// Dense path for n ≤ [`DENSE_CAP`], iterative above it.
pub fn relaxation_estimate(kernel: &SingleCardKernel) -> Result<Relaxation, RelaxationError> {
    if kernel.n() <= DENSE_CAP {
        relaxation_dense(kernel)
    } else {
        relaxation_iterative(kernel, &IterOptions::default())
    }
}

pub fn dense_matrix(kernel: &SingleCardKernel) -> DMatrix<f64> {
    let n = kernel.n();
    let mut a = DMatrix::zeros(n, n);
    for (x, y, w) in kernel.triplets() {
        a[(x - 1, y - 1)] += w;
    }
    a
}

/// All eigenvalues of the kernel; drops the one nearest 1 and returns the
/// largest remaining modulus.
pub fn relaxation_dense(kernel: &SingleCardKernel) -> Result<Relaxation, RelaxationError> {
    let n = kernel.n();
    if n > DENSE_CAP {
        return Err(RelaxationError::TooLarge { n, cap: DENSE_CAP });
    }
    let ev = dense_matrix(kernel).complex_eigenvalues();
    let mut moduli: Vec<(f64, f64)> = ev.iter().map(|z| ((z - 1.0).modulus(), z.modulus())).collect();
    let one = moduli
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
        .map(|(k, _)| k)
        .expect("nonempty spectrum");
    moduli.swap_remove(one);
    let lambda2 = moduli.iter().map(|&(_, r)| r).fold(0.0, f64::max);
    Ok(Relaxation::from_lambda(lambda2, RelaxationMethod::Dense, 0.0, 0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterOptions {
    /// Subspace dimension.
    pub block: usize,
    /// Stop when successive estimates of |λ₂| differ by less than
    /// `tol · (1 − |λ₂|)`.
    pub tol: f64,
    pub max_iter: usize,
    pub check_every: usize,
    pub seed: u64,
}

impl Default for IterOptions {
    fn default() -> Self {
        Self { block: 8, tol: 1e-5, max_iter: 2_000_000, check_every: 50, seed: 0x5EED }
    }
}

/// Subspace iteration on the mean-zero functions (invariant because the
/// kernel is doubly stochastic) with Rayleigh–Ritz extraction, so complex
/// pairs are handled.
pub fn relaxation_iterative(kernel: &SingleCardKernel, opt: &IterOptions) -> Result<Relaxation, RelaxationError> {
    let n = kernel.n();
    let b = opt.block.min(n - 1).max(1);
    let mut rng = keyed_rng(opt.seed, 0);
    let mut q = DMatrix::<f64>::from_fn(n, b, |_, _| rng.random::<f64>() - 0.5);
    center_columns(&mut q);
    q = q.qr().q();
    let mut z = DMatrix::<f64>::zeros(n, b);
    let mut prev = f64::NAN;
    let (mut est, mut residual) = (f64::NAN, f64::INFINITY);
    for it in 1..=opt.max_iter {
        for c in 0..b {
            kernel.pull(q.column(c).as_slice(), z.column_mut(c).as_mut_slice());
        }
        center_columns(&mut z);
        if it % opt.check_every == 0 {
            let h = q.transpose() * &z;
            residual = (&z - &q * &h).norm();
            est = h.complex_eigenvalues().iter().map(|v| v.modulus()).fold(0.0, f64::max);
            if libm::fabs(est - prev) < opt.tol * (1.0 - est) {
                return Ok(Relaxation::from_lambda(est, RelaxationMethod::Iterative, residual, it));
            }
            prev = est;
        }
        q = z.clone().qr().q();
    }
    Err(RelaxationError::NotConverged { estimate: est, residual, iterations: opt.max_iter })
}

fn center_columns(a: &mut DMatrix<f64>) {
    for mut c in a.column_iter_mut() {
        let mean = c.sum() / c.len() as f64;
        c.add_scalar_mut(-mean);
    }
}
