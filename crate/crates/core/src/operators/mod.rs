//! Truncations of `H`, the Cesàro-Hardy operator `C` and its adjoint, the
//! sampled Laplace transform, and a power-iteration norm estimate.

mod laplace;

pub use laplace::{
    laplace_gram, sample_laplace, sample_laplace_on_grid, LaplaceGrid, LaplaceSample,
};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sequences::NodeWeightSequence;

/// Largest dimension stored densely; bigger truncations compute entries on
/// the fly during each product.
pub const DENSE_LIMIT: usize = 4096;

// Below this size the row loop runs sequentially; the result is identical.
const PARALLEL_ROWS: usize = 128;

/// `d_i d_j / (x_i + x_j)` for 1-based indices.
pub fn hilbert_entry(seq: &NodeWeightSequence, i: usize, j: usize) -> Result<f64> {
    let fetch = |k: usize| {
        (k >= 1)
            .then(|| seq.pair(k))
            .flatten()
            .ok_or_else(|| Error::InvalidParameter(format!("index {k} outside the sequence")))
    };
    let (xi, di) = fetch(i)?;
    let (xj, dj) = fetch(j)?;
    Ok(entry(xi, di, xj, dj))
}

#[inline]
fn entry(xi: f64, di: f64, xj: f64, dj: f64) -> f64 {
    di * dj / (xi + xj)
}

/// The leading `K x K` block of `H`. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedHilbertMatrix {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// Row-major, mirrored from the upper triangle so symmetry is exact.
    dense: Option<Vec<f64>>,
}

impl TruncatedHilbertMatrix {
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidParameter("truncation needs K >= 1".into()));
        }
        let nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let k = nodes.len();
        let dense = (k <= DENSE_LIMIT).then(|| {
            let mut a = vec![0.0; k * k];
            for i in 0..k {
                for j in i..k {
                    let v = entry(nodes[i], weights[i], nodes[j], weights[j]);
                    a[i * k + j] = v;
                    a[j * k + i] = v;
                }
            }
            a
        });
        Ok(TruncatedHilbertMatrix {
            nodes,
            weights,
            dense,
        })
    }

    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Entry `(i, j)`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match &self.dense {
            Some(a) => a[i * self.dim() + j],
            None => {
                let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
                entry(
                    self.nodes[lo],
                    self.weights[lo],
                    self.nodes[hi],
                    self.weights[hi],
                )
            }
        }
    }

    /// Row-major copy of all entries.
    pub fn to_row_major(&self) -> Vec<f64> {
        match &self.dense {
            Some(a) => a.clone(),
            None => {
                let k = self.dim();
                (0..k * k).map(|n| self.get(n / k, n % k)).collect()
            }
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        let k = self.dim();
        (0..k)
            .map(|i| (0..k).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Diagonal `d_i^2 / (2 x_i)`.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    /// `Hf`. Each row is accumulated left to right, so the result does not
    /// depend on how rows are distributed over threads.
    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        let k = self.dim();
        if f.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                actual: f.len(),
            });
        }
        let row = |i: usize| -> f64 {
            let mut acc = 0.0;
            for (j, &fj) in f.iter().enumerate() {
                acc += self.get(i, j) * fj;
            }
            acc
        };
        Ok(if k >= PARALLEL_ROWS {
            (0..k).into_par_iter().map(row).collect()
        } else {
            (0..k).map(row).collect()
        })
    }
}

/// Leading `K x K` block of `H` for the sequence.
pub fn build_truncation(seq: &NodeWeightSequence, k: usize) -> Result<TruncatedHilbertMatrix> {
    TruncatedHilbertMatrix::from_pairs(&seq.eval_prefix(k)?)
}

/// `H^K f` with `K = f.len()`.
pub fn apply_h(seq: &NodeWeightSequence, f: &[f64]) -> Result<Vec<f64>> {
    build_truncation(seq, f.len())?.apply(f)
}

fn ascending_order(pairs: &[(f64, f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_by(|&a, &b| pairs[a].0.total_cmp(&pairs[b].0));
    order
}

fn window_for(seq: &NodeWeightSequence, f: &[f64]) -> Result<Vec<(f64, f64)>> {
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "vector has non-finite entries".into(),
        ));
    }
    seq.eval_prefix(f.len())
}

/// `(Cf)_n = (d_n / x_n) Σ_{x_k <= x_n} d_k f_k` over the first `f.len()` pairs.
pub fn apply_cesaro(seq: &NodeWeightSequence, f: &[f64]) -> Result<Vec<f64>> {
    let pairs = window_for(seq, f)?;
    let mut out = vec![0.0; f.len()];
    let mut running = 0.0;
    for n in ascending_order(&pairs) {
        let (x, d) = pairs[n];
        running += d * f[n];
        out[n] = d / x * running;
    }
    Ok(out)
}

/// `(C*f)_n = d_n Σ_{x_k >= x_n} d_k f_k / x_k` over the first `f.len()` pairs.
pub fn apply_cesaro_adjoint(seq: &NodeWeightSequence, f: &[f64]) -> Result<Vec<f64>> {
    let pairs = window_for(seq, f)?;
    let mut out = vec![0.0; f.len()];
    let mut running = 0.0;
    for n in ascending_order(&pairs).into_iter().rev() {
        let (x, d) = pairs[n];
        running += d * f[n] / x;
        out[n] = d * running;
    }
    Ok(out)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Largest eigenvalue of a symmetric positive semidefinite truncation by
/// power iteration from the normalized all-ones vector. Stops once the
/// Rayleigh quotient changes by at most `tol` relative.
pub fn operator_norm_estimate(
    matrix: &TruncatedHilbertMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let k = matrix.dim();
    let mut v = vec![1.0 / (k as f64).sqrt(); k];
    let mut estimate = 0.0;
    for iteration in 1..=max_iter {
        let w = matrix.apply(&v)?;
        let rayleigh = dot(&v, &w);
        let norm = dot(&w, &w).sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        v = w.into_iter().map(|c| c / norm).collect();
        if iteration > 1 && (rayleigh - estimate).abs() <= tol * rayleigh.abs() {
            return Ok(rayleigh);
        }
        estimate = rayleigh;
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        estimate,
        iterate: v,
    })
}

/// One value per line under a `# K=.. family=..` header.
pub fn write_vector_csv(values: &[f64], family: &str) -> String {
    let mut out = format!("# K={} family={}\n", values.len(), family);
    for v in values {
        out.push_str(&format!("{v}\n"));
    }
    out
}

/// Reads the format written by [`write_vector_csv`]; `#` lines and blank
/// lines are skipped, and a trailing comma-separated field is ignored.
pub fn read_vector_csv(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let field = line.split(',').next().unwrap_or("").trim();
        let v: f64 = field.parse().map_err(|_| Error::Parse {
            line: n + 1,
            message: format!("cannot parse {field:?} as a number"),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                line: n + 1,
                message: "vector entries must be finite".into(),
            });
        }
        values.push(v);
    }
    Ok(values)
}
