use crate::error::{Error, Result};
use crate::sequences::NodeWeightSequence;

/// `ln det` of the Cauchy-type matrix built from `pairs`:
///
/// ```text
/// ln γ = Σ_i 2 ln d_i + Σ_{i>j} 2 ln|x_i - x_j| - Σ_{i,j} ln(x_i + x_j)
/// ```
///
/// Returns `-∞` when some weight is zero.
pub fn log_gamma_of_pairs(pairs: &[(f64, f64)]) -> Result<f64> {
    let mut sorted: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    sorted.sort_by(f64::total_cmp);
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateNode(w[0]));
    }
    if pairs.iter().any(|p| p.1 == 0.0) {
        return Ok(f64::NEG_INFINITY);
    }
    let mut total = 0.0;
    for (i, &(xi, di)) in pairs.iter().enumerate() {
        total += 2.0 * di.ln() - (2.0 * xi).ln();
        for &(xj, _) in &pairs[..i] {
            total += 2.0 * (xi - xj).abs().ln() - 2.0 * (xi + xj).ln();
        }
    }
    Ok(total)
}

/// `ln γ_k`, the log-determinant of the leading `k x k` block.
pub fn log_gamma(seq: &NodeWeightSequence, k: usize) -> Result<f64> {
    log_gamma_of_pairs(&seq.eval_prefix(k)?)
}

/// Natural log of the lower bound on the `k`-th singular value:
/// `ln γ_k - (k-1) ln(tr / (k-1))` with `tr = ½ Σ_{i<=k} d_i^2 / x_i`, and
/// `ln γ_1` for `k = 1`.
pub fn lower_bound_sigma(seq: &NodeWeightSequence, k: usize) -> Result<f64> {
    let pairs = seq.eval_prefix(k)?;
    let log_gamma = log_gamma_of_pairs(&pairs)?;
    if k == 1 || log_gamma == f64::NEG_INFINITY {
        return Ok(log_gamma);
    }
    let trace: f64 = pairs.iter().map(|&(x, d)| d * d / (2.0 * x)).sum();
    let m = (k - 1) as f64;
    Ok(log_gamma - m * (trace / m).ln())
}
