//! The Muckenhoupt-type functions
//!
//! ```text
//! N(x) = Σ_{x_j <= x} d_j^2,      M(x) = Σ_{x_j >= x} d_j^2 / x_j^2,
//! ```
//!
//! their finite truncations `N^K`, `M^K`, the products `N(x_k) M(x_k)` and
//! the tail functional `B̃(L)`, all as rigorous [`BoundInterval`]s.
//!
//! Infinite sums are split into a scanned window of `k_scan` indices and a
//! tail closed by the family's [`TailOracle`](crate::sequences::TailOracle);
//! suprema over infinite index ranges are closed with the family's decay
//! certificate.

mod inequalities;
mod interval;

pub use inequalities::{hardy_lemma_check, useful_inequality_check};
pub use interval::{BoundInterval, Provenance, RELATIVE_SLACK};

use crate::error::{Error, Result};
use crate::sequences::{Monotonicity, NodeWeightSequence, PowerLaw};

// Summation in node order, so the result does not depend on how the pairs
// are listed.
fn sorted_sum(mut terms: Vec<(f64, f64)>) -> f64 {
    terms.sort_by(|a, b| a.0.total_cmp(&b.0));
    terms.iter().map(|t| t.1).sum()
}

/// `N^K(x)` over the given finite pairs.
pub fn nk_of(pairs: &[(f64, f64)], x: f64) -> f64 {
    sorted_sum(
        pairs
            .iter()
            .filter(|&&(xj, _)| xj <= x)
            .map(|&(xj, d)| (xj, d * d))
            .collect(),
    )
}

/// `M^K(x)` over the given finite pairs.
pub fn mk_of(pairs: &[(f64, f64)], x: f64) -> f64 {
    sorted_sum(
        pairs
            .iter()
            .filter(|&&(xj, _)| xj >= x)
            .map(|&(xj, d)| (-xj, (d / xj) * (d / xj)))
            .collect(),
    )
}

fn finite_pairs(seq: &NodeWeightSequence) -> Option<Vec<(f64, f64)>> {
    seq.len().map(|n| seq.window(n))
}

fn scan_window(k_scan: usize) -> Result<usize> {
    if k_scan == 0 {
        Err(Error::InvalidParameter("scan window must be >= 1".into()))
    } else {
        Ok(k_scan)
    }
}

/// `N(x)`.
///
/// Exact for finite and increasing sequences; an increasing sequence whose
/// window ends at or below `x` yields [`Error::ScanExhausted`]. For a
/// decreasing sequence infinitely many nodes lie below `x`, and the sum is
/// closed with the tail oracle.
pub fn n_of(seq: &NodeWeightSequence, x: f64, k_scan: usize) -> Result<BoundInterval> {
    let k_scan = scan_window(k_scan)?;
    if let Some(pairs) = finite_pairs(seq) {
        return Ok(BoundInterval::exact(nk_of(&pairs, x)));
    }
    let law = seq.power_law().expect("infinite sequences are power laws");
    if !seq.is_reciprocal() {
        let last = law.node(k_scan);
        let count = law.last_index_at_or_below(x);
        let sum: f64 = (1..=count.min(k_scan)).map(|j| law.weight(j).powi(2)).sum();
        if last <= x {
            return Err(Error::ScanExhausted {
                x,
                scan: k_scan,
                last_node: last,
                partial: BoundInterval::scan_only(sum),
            });
        }
        return Ok(BoundInterval::exact(sum));
    }
    let window = seq.window(k_scan);
    let partial: f64 = window
        .iter()
        .rev()
        .filter(|&&(xj, _)| xj <= x)
        .map(|&(_, d)| d * d)
        .sum();
    Ok(BoundInterval::truncated(
        partial,
        seq.tail_oracle().upper_tail_after(k_scan),
    ))
}

/// `M(x)`, the mirror image of [`n_of`].
pub fn m_of(seq: &NodeWeightSequence, x: f64, k_scan: usize) -> Result<BoundInterval> {
    let k_scan = scan_window(k_scan)?;
    if let Some(pairs) = finite_pairs(seq) {
        return Ok(BoundInterval::exact(mk_of(&pairs, x)));
    }
    let law = seq.power_law().expect("infinite sequences are power laws");
    if !seq.is_reciprocal() {
        let first = law.first_index_at_or_above(x);
        let partial: f64 = (first..=k_scan).rev().map(|j| law.term(j)).sum();
        return Ok(BoundInterval::truncated(
            partial,
            seq.tail_oracle().upper_tail_after(k_scan),
        ));
    }
    let window = seq.window(k_scan);
    let sum = mk_of(&window, x);
    let last = window[k_scan - 1].0;
    if last >= x {
        return Err(Error::ScanExhausted {
            x,
            scan: k_scan,
            last_node: last,
            partial: BoundInterval::scan_only(sum),
        });
    }
    Ok(BoundInterval::exact(sum))
}

/// `N(x_k) M(x_k)` for the `k`-th node (1-based).
pub fn muckenhoupt_product(
    seq: &NodeWeightSequence,
    k: usize,
    k_scan: usize,
) -> Result<BoundInterval> {
    let (xk, _) = seq
        .pair(k.max(1))
        .filter(|_| k >= 1)
        .ok_or_else(|| Error::InvalidParameter(format!("index {k} outside the sequence")))?;
    let n = n_of(seq, xk, k_scan)?;
    let m = m_of(seq, xk, k_scan)?;
    Ok(n.mul(&m))
}

/// Index-based view of an infinite monotone sequence over `1..=k_scan`, in
/// its increasing orientation.
///
/// Products `N(x_k) M(x_k)` are invariant under the reciprocal transform
/// index by index (`N` and `M` swap), so a decreasing built-in shares the
/// table of its increasing base.
#[derive(Debug, Clone)]
pub struct ScanTable {
    law: PowerLaw,
    /// `mass[k-1] = N(x_k) = Σ_{j<=k} d_j^2`
    mass: Vec<f64>,
    /// `suffix[k-1] = Σ_{j=k}^{k_scan} d_j^2 / x_j^2`
    suffix: Vec<f64>,
    tail: f64,
}

impl ScanTable {
    pub fn new(seq: &NodeWeightSequence, k_scan: usize) -> Result<Self> {
        let k_scan = scan_window(k_scan)?;
        let law = seq.power_law().ok_or_else(|| {
            Error::InvalidParameter("scan tables need an infinite built-in family".into())
        })?;
        let mut mass = Vec::with_capacity(k_scan);
        let mut acc = 0.0;
        for j in 1..=k_scan {
            acc += law.weight(j).powi(2);
            mass.push(acc);
        }
        let mut suffix = vec![0.0; k_scan];
        let mut acc = 0.0;
        for j in (1..=k_scan).rev() {
            acc += law.term(j);
            suffix[j - 1] = acc;
        }
        Ok(ScanTable {
            law,
            mass,
            suffix,
            tail: law.tail_upper(k_scan),
        })
    }

    pub fn k_scan(&self) -> usize {
        self.mass.len()
    }

    pub fn law(&self) -> &PowerLaw {
        &self.law
    }

    /// `N(x_k)`, exact.
    pub fn mass(&self, k: usize) -> BoundInterval {
        BoundInterval::exact(self.mass[k - 1])
    }

    /// `M(x_k)` as `[partial, partial + tail]`.
    pub fn m(&self, k: usize) -> BoundInterval {
        BoundInterval::truncated(self.suffix[k - 1], self.tail)
    }

    /// `N(x_k) M(x_k)` for `1 <= k <= k_scan`.
    pub fn product(&self, k: usize) -> BoundInterval {
        self.mass(k).mul(&self.m(k))
    }

    /// `N(x_K) M(x_{K+1})` for `1 <= K < k_scan`.
    pub fn shifted_product(&self, k: usize) -> BoundInterval {
        self.mass(k).mul(&self.m(k + 1))
    }

    fn closure(&self, from: usize) -> f64 {
        self.law.product_sup_from(from) * (1.0 + RELATIVE_SLACK)
    }

    fn provenance(&self) -> Provenance {
        if self.law.is_convergent() {
            Provenance::TruncatedWithTail
        } else {
            Provenance::ScanOnly
        }
    }

    fn sup_over(
        &self,
        range: std::ops::RangeInclusive<usize>,
        f: impl Fn(usize) -> BoundInterval,
        from: usize,
    ) -> BoundInterval {
        let closure = self.closure(from);
        let scanned = range.map(f).reduce(|a, b| a.max(&b));
        match scanned {
            Some(s) => BoundInterval {
                lower: s.lower,
                upper: s.upper.max(closure),
                provenance: self.provenance(),
            },
            None => BoundInterval {
                lower: 0.0,
                upper: closure,
                provenance: self.provenance(),
            },
        }
    }

    /// `sup_{k >= l} N(x_k) M(x_k)`.
    pub fn sup_products(&self, l: usize) -> BoundInterval {
        let l = l.max(1);
        let mut sup = self.sup_over(l..=self.k_scan(), |k| self.product(k), self.k_scan() + 1);
        if l > self.k_scan() {
            sup.lower = self.law.product_lower(l);
            sup.upper = self.closure(l);
        }
        sup
    }

    /// `sup_{K >= l} N(x_K) M(x_{K+1})`.
    pub fn sup_shifted_products(&self, l: usize) -> BoundInterval {
        let l = l.max(1);
        let end = self.k_scan().saturating_sub(1);
        let mut sup = self.sup_over(l..=end, |k| self.shifted_product(k), self.k_scan());
        if l > end {
            sup.upper = self.closure(l);
        }
        sup
    }

    /// `B̃(L)`.
    pub fn btilde(&self, l: usize) -> BoundInterval {
        self.sup_shifted_products(l).add(&self.sup_products(l))
    }
}

/// `B̃(L) = sup_{K>=L} N(max_{L<=i<=K} x_i) M(min_{i>K} x_i) + sup_{k>=L} N(x_k) M(x_k)`.
///
/// For increasing sequences the first term is `sup_{K>=L} N(x_K) M(x_{K+1})`.
/// Decreasing sequences are evaluated through their reciprocal, which
/// generates the same matrix. Finite sequences are evaluated exactly; in
/// unsorted order the value is reported as [`Provenance::ScanOnly`] because it
/// is not a certified bound there.
pub fn btilde(seq: &NodeWeightSequence, l: usize, k_scan: usize) -> Result<BoundInterval> {
    if l == 0 {
        return Err(Error::InvalidParameter("B̃(L) needs L >= 1".into()));
    }
    match seq.monotonicity() {
        Monotonicity::Decreasing => return btilde(&seq.reciprocal_transform(), l, k_scan),
        _ if seq.is_finite() => {}
        _ => return Ok(ScanTable::new(seq, k_scan)?.btilde(l)),
    }

    let pairs = finite_pairs(seq).expect("finite");
    let n = pairs.len();
    if l > n {
        return Ok(BoundInterval::zero());
    }
    let mut first = 0.0f64;
    let mut running_max = f64::NEG_INFINITY;
    for k in l..=n {
        running_max = running_max.max(pairs[k - 1].0);
        let min_beyond = pairs[k..].iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let m = if min_beyond.is_finite() {
            mk_of(&pairs, min_beyond)
        } else {
            0.0
        };
        first = first.max(nk_of(&pairs, running_max) * m);
    }
    let second = (l..=n)
        .map(|k| {
            let x = pairs[k - 1].0;
            nk_of(&pairs, x) * mk_of(&pairs, x)
        })
        .fold(0.0f64, f64::max);
    let value = first + second;
    let provenance = if seq.monotonicity() == Monotonicity::Unsorted {
        Provenance::ScanOnly
    } else {
        Provenance::Exact
    };
    Ok(BoundInterval {
        lower: value,
        upper: value,
        provenance,
    })
}
