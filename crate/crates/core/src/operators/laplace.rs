//! Sampled Laplace transform `(Lf)_n = d_n ∫_0^∞ e^{-x_n t} f(t) dt`.
//!
//! With `t = -ln u` the integral becomes `∫_0^1 u^{x_n - 1} f(-ln u) du`.
//! The unit interval is split into dyadic panels `[2^{-(j+1)}, 2^{-j}]`,
//! `j < P`, plus the last panel `[0, 2^{-P}]`, each integrated with a
//! 64-point Gauss-Legendre rule. The `u^{x-1}` singularity at zero stays
//! inside the last panel, whose contribution shrinks like `2^{-P x}`; `P` is
//! doubled until the result settles.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sequences::NodeWeightSequence;

const NODES_PER_PANEL: usize = 64;
const INITIAL_PANELS: usize = 8;
/// Deepest panel stays well inside the normal double range.
const MAX_PANELS: usize = 1000;
const RELATIVE_CHANGE: f64 = 1e-10;

fn reference_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(NonZeroUsize::new(NODES_PER_PANEL).unwrap())
            .as_node_weight_pairs()
            .to_vec()
    })
}

/// Quadrature nodes `t_i` and weights `w_i` with
/// `∫_0^∞ g(t) dt ≈ Σ w_i g(t_i)`, for integrands carrying an `e^{-x t}` factor.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    panels: usize,
}

impl LaplaceGrid {
    /// Dyadic grid with `panels` geometric panels plus the one touching zero.
    pub fn dyadic(panels: usize) -> Self {
        let mut nodes = Vec::with_capacity((panels + 1) * NODES_PER_PANEL);
        let mut weights = Vec::with_capacity(nodes.capacity());
        let mut push_panel = |lo: f64, hi: f64| {
            let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            for &(z, w) in reference_rule() {
                let u = mid + half * z;
                nodes.push(-u.ln());
                // du = u dt
                weights.push(half * w / u);
            }
        };
        for j in 0..panels {
            let hi = (-(j as f64)).exp2();
            push_panel(0.5 * hi, hi);
        }
        push_panel(0.0, (-(panels as f64)).exp2());
        LaplaceGrid {
            nodes,
            weights,
            panels,
        }
    }

    /// A caller-supplied rule.
    pub fn from_parts(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidGrid);
        }
        if nodes.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: nodes.len(),
                actual: weights.len(),
            });
        }
        Ok(LaplaceGrid {
            nodes,
            weights,
            panels: 0,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Result of [`sample_laplace`].
#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceSample {
    pub values: Vec<f64>,
    /// Largest change between the last two panel counts.
    pub error_estimate: f64,
    pub panels: usize,
}

/// Applies the sampled transform to `samples` of `f` taken at `grid.nodes()`.
pub fn sample_laplace_on_grid(
    seq: &NodeWeightSequence,
    samples: &[f64],
    grid: &LaplaceGrid,
    k: usize,
) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid);
    }
    if samples.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            actual: samples.len(),
        });
    }
    let pairs = seq.eval_prefix(k)?;
    Ok(pairs
        .iter()
        .map(|&(x, d)| {
            let mut acc = 0.0;
            for ((&t, &w), &f) in grid.nodes.iter().zip(&grid.weights).zip(samples) {
                if f != 0.0 {
                    acc += w * (-x * t).exp() * f;
                }
            }
            d * acc
        })
        .collect())
}

/// Adaptive version: `f` is evaluated on successively finer dyadic grids.
pub fn sample_laplace(
    seq: &NodeWeightSequence,
    f: impl Fn(f64) -> f64,
    k: usize,
) -> Result<LaplaceSample> {
    let evaluate = |panels: usize| -> Result<Vec<f64>> {
        let grid = LaplaceGrid::dyadic(panels);
        let samples: Vec<f64> = grid.nodes().iter().map(|&t| f(t)).collect();
        sample_laplace_on_grid(seq, &samples, &grid, k)
    };
    let mut panels = INITIAL_PANELS;
    let mut previous = evaluate(panels)?;
    loop {
        let next_panels = (2 * panels).min(MAX_PANELS);
        let current = evaluate(next_panels)?;
        let change = previous
            .iter()
            .zip(&current)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let scale = current.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if change <= RELATIVE_CHANGE * scale || next_panels == MAX_PANELS {
            return Ok(LaplaceSample {
                values: current,
                error_estimate: change,
                panels: next_panels,
            });
        }
        panels = next_panels;
        previous = current;
    }
}

/// `G[m][n] = d_m d_n ∫_0^∞ e^{-(x_m + x_n) t} dt` by quadrature, i.e. the
/// product `L L*` restricted to the first `k` indices.
pub fn laplace_gram(seq: &NodeWeightSequence, k: usize) -> Result<Vec<Vec<f64>>> {
    let pairs = seq.eval_prefix(k)?;
    pairs
        .par_iter()
        .map(|&(xm, dm)| {
            let column = sample_laplace(seq, |t| dm * (-xm * t).exp(), k)?;
            Ok(column.values)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_rule_is_exact_for_polynomials() {
        // 64 nodes integrate degree 127 exactly
        let rule = reference_rule();
        assert_eq!(rule.len(), 64);
        for degree in [0, 1, 10, 63, 126] {
            let q: f64 = rule.iter().map(|&(z, w)| w * z.powi(degree)).sum();
            let exact = if degree % 2 == 1 {
                0.0
            } else {
                2.0 / (degree as f64 + 1.0)
            };
            assert!((q - exact).abs() < 1e-14, "degree {degree}: {q}");
        }
    }

    #[test]
    fn grid_integrates_exponentials() {
        let grid = LaplaceGrid::dyadic(64);
        for s in [0.5, 1.0, 3.7, 40.0] {
            let q: f64 = grid
                .nodes()
                .iter()
                .zip(grid.weights())
                .map(|(&t, &w)| w * (-s * t).exp())
                .sum();
            assert!((q * s - 1.0).abs() < 1e-9, "s={s}: {q}");
        }
    }

    #[test]
    fn exponential_input() {
        let seq = NodeWeightSequence::standard();
        let out = sample_laplace(&seq, |t| (-t).exp(), 30).unwrap();
        for (n, v) in out.values.iter().enumerate() {
            let x = n as f64 + 0.5;
            assert!((v - 1.0 / (x + 1.0)).abs() < 1e-8, "n={n}");
        }
        assert!((out.values[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!(out.error_estimate < 1e-9);
    }

    #[test]
    fn zero_input() {
        let out = sample_laplace(&NodeWeightSequence::standard(), |_| 0.0, 5).unwrap();
        assert_eq!(out.values, vec![0.0; 5]);
    }

    #[test]
    fn grid_errors() {
        let seq = NodeWeightSequence::standard();
        assert_eq!(
            LaplaceGrid::from_parts(vec![], vec![]),
            Err(Error::InvalidGrid)
        );
        let grid = LaplaceGrid::dyadic(4);
        assert!(matches!(
            sample_laplace_on_grid(&seq, &[1.0], &grid, 3),
            Err(Error::DimensionMismatch { .. })
        ));
        let custom = LaplaceGrid::from_parts(vec![1.0], vec![2.0]).unwrap();
        let v = sample_laplace_on_grid(&seq, &[1.0], &custom, 1).unwrap();
        assert!((v[0] - 2.0 * (-0.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn gram_reproduces_small_truncation() {
        let seq = NodeWeightSequence::weighted_standard();
        let gram = laplace_gram(&seq, 6).unwrap();
        let h = crate::operators::build_truncation(&seq, 6).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert!((gram[i][j] - h.get(i, j)).abs() < 1e-8 * h.get(i, j).max(1e-3));
            }
        }
    }
}
