use crate::error::{Error, Result};

/// `½(χ_{y<x}/x + χ_{y≥x}/y) <= 1/(x+y) <= χ_{y<x}/x + χ_{y≥x}/y` for `x, y > 0`.
pub fn useful_inequality_check(x: f64, y: f64) -> bool {
    let reciprocal_max = if y < x { 1.0 / x } else { 1.0 / y };
    let middle = 1.0 / (x + y);
    0.5 * reciprocal_max <= middle && middle <= reciprocal_max
}

/// Discrete Hardy lemma for a finite sequence with positive weights:
///
/// ```text
/// Σ_{x_n <= x} w_n / sqrt(Σ_{x_j <= x_n} w_j)  <=  2 sqrt(Σ_{x_j <= x} w_j)
/// ```
///
/// Both sides only depend on the multiset of pairs, so the order of `pairs`
/// is irrelevant. A relative rounding allowance of `1e-12` is granted.
pub fn hardy_lemma_check(pairs: &[(f64, f64)], x: f64) -> Result<bool> {
    if let Some(&(_, w)) = pairs.iter().find(|&&(_, w)| !(w > 0.0)) {
        return Err(Error::InvalidWeight(w));
    }
    let mut below: Vec<(f64, f64)> = pairs.iter().copied().filter(|p| p.0 <= x).collect();
    below.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Some(w) = below.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::DuplicateNode(w[0].0));
    }
    let mut cumulative = 0.0;
    let mut lhs = 0.0;
    for &(_, w) in &below {
        cumulative += w;
        lhs += w / cumulative.sqrt();
    }
    Ok(lhs <= 2.0 * cumulative.sqrt() * (1.0 + 1e-12))
}
