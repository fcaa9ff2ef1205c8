use alloc::vec::Vec;

use super::Estimate;

/// Least-squares slope of log p against log x.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    /// Points used, as (x, p).
    pub points: Vec<(f64, f64)>,
    /// Inputs dropped because p was not positive.
    pub excluded: Vec<(f64, f64)>,
    pub exponent: f64,
    pub intercept: f64,
    /// Standard error of the exponent.
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FitError {
    #[error("need at least 3 points with p > 0, have {0}")]
    TooFewPoints(usize),
}

/// Ordinary least squares in log-log coordinates.
pub fn fit_scaling(points: &[(f64, f64)]) -> Result<ScalingFit, FitError> {
    let weighted: Vec<(f64, f64, f64)> = points.iter().map(|&(x, p)| (x, p, 1.0)).collect();
    let mut f = fit_weighted(&weighted)?;
    // OLS standard error from the residual variance
    let k = f.points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = f.points.iter().map(|&(x, p)| (libm::log(x), libm::log(p))).unzip();
    let mx = xs.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| { let r = y - f.intercept - f.exponent * x; r * r }).sum();
    f.stderr = if k > 2.0 { libm::sqrt(rss / (k - 2.0) / sxx) } else { f64::INFINITY };
    Ok(f)
}

/// Weighted least squares with weights 1/Var(log p̂) from the binomial
/// counts, so noisy points pull less. The standard error is the model-based
/// one.
pub fn fit_estimates(points: &[(f64, Estimate)]) -> Result<ScalingFit, FitError> {
    let w: Vec<(f64, f64, f64)> = points
        .iter()
        .map(|&(x, e)| {
            let var = if e.successes == 0 { f64::INFINITY } else { (1.0 - e.p_hat) / e.successes as f64 };
            (x, e.p_hat, if var > 0.0 { 1.0 / var } else { 1e12 })
        })
        .collect();
    fit_weighted(&w)
}

fn fit_weighted(points: &[(f64, f64, f64)]) -> Result<ScalingFit, FitError> {
    let (used, excluded): (Vec<(f64, f64, f64)>, Vec<_>) = points.iter().copied().partition(|&(x, p, w)| p > 0.0 && x > 0.0 && w.is_finite());
    if used.len() < 3 {
        return Err(FitError::TooFewPoints(used.len()));
    }
    let sw: f64 = used.iter().map(|p| p.2).sum();
    let mx = used.iter().map(|&(x, _, w)| w * libm::log(x)).sum::<f64>() / sw;
    let my = used.iter().map(|&(_, p, w)| w * libm::log(p)).sum::<f64>() / sw;
    let sxx: f64 = used.iter().map(|&(x, _, w)| w * (libm::log(x) - mx) * (libm::log(x) - mx)).sum();
    let sxy: f64 = used.iter().map(|&(x, p, w)| w * (libm::log(x) - mx) * (libm::log(p) - my)).sum();
    let exponent = sxy / sxx;
    Ok(ScalingFit {
        points: used.iter().map(|&(x, p, _)| (x, p)).collect(),
        excluded: excluded.iter().map(|&(x, p, _)| (x, p)).collect(),
        exponent,
        intercept: my - exponent * mx,
        stderr: libm::sqrt(1.0 / sxx),
    })
}
