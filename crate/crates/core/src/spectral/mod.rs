//! Spectra of truncations and two-sided bounds on the singular values of `H`:
//! `exp(lower_bound_sigma(k)) <= λ_k(H^K) <= B̃(k)`.

mod determinant;
mod jacobi;

pub use determinant::{log_gamma, log_gamma_of_pairs, lower_bound_sigma};
pub use jacobi::eigenvalues_sym;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::muckenhoupt::{btilde, BoundInterval};
use crate::operators::{build_truncation, TruncatedHilbertMatrix};
use crate::sequences::NodeWeightSequence;

/// Eigenvalues below this fraction of `λ_max` are reported but not trusted.
pub const UNTRUSTED_RATIO: f64 = 1e-13;
/// Relative slack of the sandwich and interlacing checks.
pub const SANDWICH_SLACK: f64 = 1e-9;
const TRACE_TOLERANCE: f64 = 1e-10;
const DEFAULT_SCHEDULE_MAX: usize = 512;

/// Eigenvalues of one truncation, descending, with its trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub diagonal_sum: f64,
}

impl Spectrum {
    pub fn of(matrix: &TruncatedHilbertMatrix) -> Result<Self> {
        Ok(Spectrum {
            values: jacobi::jacobi_eigenvalues(matrix.to_row_major(), matrix.dim())?,
            diagonal_sum: matrix.trace(),
        })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn lambda_max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `λ_k`, 1-based.
    pub fn lambda(&self, k: usize) -> Option<f64> {
        self.values.get(k.wrapping_sub(1)).copied()
    }

    pub fn is_trusted(&self, k: usize) -> bool {
        self.lambda(k)
            .is_some_and(|v| v >= UNTRUSTED_RATIO * self.lambda_max())
    }

    pub fn eigen_sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Absolute rounding allowance for eigenvalues of this matrix.
    pub fn rounding(&self) -> f64 {
        self.dim() as f64 * f64::EPSILON * self.lambda_max()
    }
}

/// All eigenvalues of `H^K`, descending.
pub fn truncation_eigenvalues(seq: &NodeWeightSequence, k: usize) -> Result<Vec<f64>> {
    Ok(Spectrum::of(&build_truncation(seq, k)?)?.values)
}

/// Spectra of several truncations of one sequence, each computed once.
#[derive(Debug, Clone)]
pub struct SpectraCache {
    seq: NodeWeightSequence,
    spectra: BTreeMap<usize, Spectrum>,
}

impl SpectraCache {
    pub fn new(seq: NodeWeightSequence) -> Self {
        SpectraCache {
            seq,
            spectra: BTreeMap::new(),
        }
    }

    pub fn sequence(&self) -> &NodeWeightSequence {
        &self.seq
    }

    /// Computes the missing sizes, largest first, in parallel across matrices.
    pub fn ensure(&mut self, sizes: &[usize]) -> Result<()> {
        let mut missing: Vec<usize> = sizes
            .iter()
            .copied()
            .filter(|s| !self.spectra.contains_key(s))
            .collect();
        missing.sort_unstable_by(|a, b| b.cmp(a));
        missing.dedup();
        let computed: Vec<(usize, Spectrum)> = missing
            .par_iter()
            .map(|&size| Ok((size, Spectrum::of(&build_truncation(&self.seq, size)?)?)))
            .collect::<Result<_>>()?;
        self.spectra.extend(computed);
        Ok(())
    }

    pub fn get(&mut self, size: usize) -> Result<&Spectrum> {
        self.ensure(&[size])?;
        Ok(&self.spectra[&size])
    }
}

/// `B̃(k)`, the upper bound on the `k`-th singular value.
pub fn upper_bound_sigma(
    seq: &NodeWeightSequence,
    k: usize,
    k_scan: usize,
) -> Result<BoundInterval> {
    btilde(seq, k, k_scan)
}

/// Powers of two from `max(2, k)` up to 512, capped at the length of a
/// finite sequence (which is then included itself).
pub fn default_schedule(seq: &NodeWeightSequence, k: usize) -> Vec<usize> {
    let cap = seq
        .len()
        .unwrap_or(DEFAULT_SCHEDULE_MAX)
        .min(DEFAULT_SCHEDULE_MAX);
    let mut size = k.max(2).next_power_of_two();
    let mut schedule = Vec::new();
    while size <= cap {
        schedule.push(size);
        size *= 2;
    }
    if schedule.last() != Some(&cap) && cap >= k {
        schedule.push(cap);
    }
    schedule
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceCheck {
    pub size: usize,
    pub eigen_sum: f64,
    pub diagonal_sum: f64,
}

/// Lower bound, upper bound and the eigenvalue ladder `λ_k(H^K)` for one `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSandwich {
    pub k: usize,
    pub log_lower: f64,
    pub upper: f64,
    pub upper_interval: BoundInterval,
    pub ladder: Vec<(usize, f64)>,
    /// Ladder sizes whose `λ_k` is below the trusted range.
    pub untrusted: Vec<usize>,
    pub flags: Vec<String>,
    pub trace: Vec<TraceCheck>,
}

fn tagged(v: f64) -> serde_json::Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else if v > 0.0 {
        serde_json::json!("inf")
    } else if v < 0.0 {
        serde_json::json!("-inf")
    } else {
        serde_json::json!("nan")
    }
}

impl Serialize for SpectralSandwich {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("SpectralSandwich", 6)?;
        s.serialize_field("k", &self.k)?;
        s.serialize_field("log_lower", &tagged(self.log_lower))?;
        s.serialize_field("upper", &tagged(self.upper))?;
        s.serialize_field("ladder", &self.ladder)?;
        s.serialize_field("flags", &self.flags)?;
        s.serialize_field("trace", &self.trace)?;
        s.end()
    }
}

impl SpectralSandwich {
    /// `K,lambda_k,trusted` rows for plotting.
    pub fn ladder_csv(&self) -> String {
        let mut out = format!(
            "# k={} log_lower={} upper={}\nK,lambda_k,trusted\n",
            self.k, self.log_lower, self.upper
        );
        for &(size, v) in &self.ladder {
            out.push_str(&format!("{size},{v},{}\n", !self.untrusted.contains(&size)));
        }
        out
    }
}

/// [`sandwich_report_cached`] with a private cache.
pub fn sandwich_report(
    seq: &NodeWeightSequence,
    k: usize,
    schedule: Option<&[usize]>,
    k_scan: usize,
) -> Result<SpectralSandwich> {
    let mut cache = SpectraCache::new(seq.clone());
    sandwich_report_cached(&mut cache, k, schedule, k_scan)
}

/// Assembles the bounds and ladder for `k` and checks the sandwich, the
/// interlacing order and the trace identity on every truncation. A failed
/// check is returned as [`Error::SandwichViolation`].
///
/// Sizes below `k` are skipped; `None` selects [`default_schedule`].
pub fn sandwich_report_cached(
    cache: &mut SpectraCache,
    k: usize,
    schedule: Option<&[usize]>,
    k_scan: usize,
) -> Result<SpectralSandwich> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    let seq = cache.sequence().clone();
    let schedule: Vec<usize> = match schedule {
        Some(s) => s.to_vec(),
        None => default_schedule(&seq, k),
    };
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "schedule must be strictly ascending".into(),
        ));
    }
    let sizes: Vec<usize> = schedule.into_iter().filter(|&s| s >= k).collect();
    if sizes.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "schedule has no size >= k = {k}"
        )));
    }
    cache.ensure(&sizes)?;

    let log_lower = lower_bound_sigma(&seq, k)?;
    let upper_interval = upper_bound_sigma(&seq, k, k_scan)?;
    let violation = |size: usize, detail: String| Error::SandwichViolation { k, size, detail };

    let mut report = SpectralSandwich {
        k,
        log_lower,
        upper: upper_interval.upper,
        upper_interval,
        ladder: Vec::new(),
        untrusted: Vec::new(),
        flags: Vec::new(),
        trace: Vec::new(),
    };
    let mut previous: Option<(usize, f64)> = None;
    for size in sizes {
        let spectrum = cache.get(size)?;
        let value = spectrum.lambda(k).expect("size >= k");
        report.ladder.push((size, value));
        report.trace.push(TraceCheck {
            size,
            eigen_sum: spectrum.eigen_sum(),
            diagonal_sum: spectrum.diagonal_sum,
        });
        let diag = spectrum.diagonal_sum;
        if (spectrum.eigen_sum() - diag).abs() > TRACE_TOLERANCE * diag {
            return Err(violation(
                size,
                format!("trace {} vs diagonal sum {diag}", spectrum.eigen_sum()),
            ));
        }
        if value > report.upper * (1.0 + SANDWICH_SLACK) {
            return Err(violation(
                size,
                format!("λ_k = {value} above upper bound {}", report.upper),
            ));
        }
        if !spectrum.is_trusted(k) {
            report.untrusted.push(size);
            report.flags.push(format!("untrusted-eigenvalue K={size}"));
            continue;
        }
        let lower = log_lower.exp();
        if lower > value * (1.0 + SANDWICH_SLACK) {
            return Err(violation(
                size,
                format!("λ_k = {value} below lower bound {lower}"),
            ));
        }
        if let Some((prev_size, prev)) = previous {
            if prev > value * (1.0 + SANDWICH_SLACK) + spectrum.rounding() {
                return Err(violation(
                    size,
                    format!("interlacing: λ_k(H^{prev_size}) = {prev} > λ_k(H^{size}) = {value}"),
                ));
            }
        }
        previous = Some((size, value));
    }
    if !report.upper.is_finite() {
        report.flags.push("upper-bound-infinite".into());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn trace_of_standard_three() {
        let v = truncation_eigenvalues(&NodeWeightSequence::standard(), 3).unwrap();
        assert_relative_eq!(v.iter().sum::<f64>(), 23.0 / 15.0, max_relative = 1e-14);
        assert!(v.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn psd_truncations() {
        for seq in [
            NodeWeightSequence::standard(),
            NodeWeightSequence::weighted_standard(),
            NodeWeightSequence::squared_odd(),
        ] {
            let v = truncation_eigenvalues(&seq, 60).unwrap();
            assert!(*v.last().unwrap() >= -1e-10 * v[0]);
        }
    }

    #[test]
    fn default_schedules() {
        let s = NodeWeightSequence::standard();
        assert_eq!(
            default_schedule(&s, 1),
            vec![2, 4, 8, 16, 32, 64, 128, 256, 512]
        );
        assert_eq!(default_schedule(&s, 5), vec![8, 16, 32, 64, 128, 256, 512]);
        let f = NodeWeightSequence::custom((1..=6).map(|i| (i as f64, 1.0)).collect()).unwrap();
        assert_eq!(default_schedule(&f, 3), vec![4, 6]);
    }

    #[test]
    fn standard_k2_ladder() {
        let sched: Vec<usize> = (1..=8).map(|j| 1usize << j).collect();
        let r = sandwich_report(&NodeWeightSequence::standard(), 2, Some(&sched), 10_000).unwrap();
        assert_relative_eq!(r.log_lower, (1.0f64 / 16.0).ln(), max_relative = 1e-14);
        assert_eq!(r.ladder.len(), 8);
        assert!(r.ladder.windows(2).all(|w| w[0].1 <= w[1].1));
        for &(_, v) in &r.ladder {
            assert!(v >= 1.0 / 16.0 && v <= r.upper);
        }
        assert!(r.flags.is_empty());
    }

    #[test]
    fn finite_sequence_of_size_k() {
        let f = NodeWeightSequence::custom(vec![(0.5, 1.0), (1.7, 0.4), (3.0, 2.0)]).unwrap();
        let r = sandwich_report(&f, 3, Some(&[3]), 100).unwrap();
        assert_eq!(r.ladder.len(), 1);
        let lam = truncation_eigenvalues(&f, 3).unwrap()[2];
        assert_eq!(r.ladder[0].1, lam);
        assert!(r.log_lower.exp() <= lam);
    }

    #[test]
    fn schedule_validation() {
        let s = NodeWeightSequence::standard();
        assert!(sandwich_report(&s, 2, Some(&[8, 4]), 100).is_err());
        assert!(sandwich_report(&s, 9, Some(&[4, 8]), 100).is_err());
        assert!(sandwich_report(&s, 0, None, 100).is_err());
    }

    #[test]
    fn serializes_fixed_fields() {
        let r = sandwich_report(
            &NodeWeightSequence::weighted_standard(),
            3,
            Some(&[4, 8, 16]),
            1000,
        )
        .unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in ["k", "log_lower", "upper", "ladder", "flags", "trace"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["ladder"][0][0], 4);
        assert!(r.ladder_csv().contains("K,lambda_k,trusted\n4,"));
    }
}
