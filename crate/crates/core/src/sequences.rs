//! Node/weight sequences `(x_i, d_i)` that generate a generalized Hilbert
//! matrix, the built-in families with their analytic metadata, and the
//! reciprocal transformation `(x, d) -> (1/x, d/x)`.
//!
//! Every built-in family is an instance of one power law
//!
//! ```text
//! x_j = a (j - b)^α - σ,    d_j = j^(-β),    β ∈ {0, 1},
//! ```
//!
//! which is what the tail oracles and decay certificates are derived from.
//! Indices are 1-based throughout this module.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Unsorted,
}

impl Monotonicity {
    pub fn flipped(self) -> Self {
        match self {
            Monotonicity::Increasing => Monotonicity::Decreasing,
            Monotonicity::Decreasing => Monotonicity::Increasing,
            Monotonicity::Unsorted => Monotonicity::Unsorted,
        }
    }

    pub fn is_monotone(self) -> bool {
        self != Monotonicity::Unsorted
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `x_i = i - 1/2`, `d_i = 1`: the classical Hilbert matrix `1/(i+j-1)`.
    Standard,
    /// `x_i = i^α - shift`, `d_i = 1`.
    PowerAlpha { alpha: f64, shift: f64 },
    /// `x_i = i - 1/2`, `d_i = 1/i`.
    WeightedStandard,
    /// `x_i = 2i - 1`, `d_i = 1` (midpoint sampling of fractional diffusion).
    OddLinear,
    /// `x_i = (2i - 1)^2`, `d_i = 1` (midpoint sampling of the heat equation).
    SquaredOdd,
    /// A genuinely finite list of `(x, d)` pairs.
    CustomFinite(Vec<(f64, f64)>),
}

/// How a tail bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailMethod {
    IntegralTest,
    ClosedForm,
    ExactFinite,
}

/// Analytic description `x_j = a (j - b)^α - σ`, `d_j = j^(-β)`.
///
/// On `s >= 1` the node function is positive and increasing and the term
/// `t(s) = d(s)^2 / x(s)^2` is decreasing, so the integral test applies to
/// every tail `Σ_{j>J} t_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    scale: f64,
    offset: f64,
    alpha: f64,
    shift: f64,
    weighted: bool,
}

impl PowerLaw {
    fn new(scale: f64, offset: f64, alpha: f64, shift: f64, weighted: bool) -> Self {
        PowerLaw {
            scale,
            offset,
            alpha,
            shift,
            weighted,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn node(&self, j: usize) -> f64 {
        self.scale * self.power(j as f64 - self.offset) - self.shift
    }

    pub fn weight(&self, j: usize) -> f64 {
        if self.weighted {
            1.0 / j as f64
        } else {
            1.0
        }
    }

    /// `d_j^2 / x_j^2`.
    pub fn term(&self, j: usize) -> f64 {
        let r = self.weight(j) / self.node(j);
        r * r
    }

    fn power(&self, base: f64) -> f64 {
        // Integer exponents keep nodes such as i^2 - 1/2 exact.
        if self.alpha.fract() == 0.0 && self.alpha <= 32.0 {
            base.powi(self.alpha as i32)
        } else {
            base.powf(self.alpha)
        }
    }

    fn beta(&self) -> f64 {
        if self.weighted {
            1.0
        } else {
            0.0
        }
    }

    /// `q = 2α + 2β - 1`; the terms decay like `j^-(q+1)`.
    pub fn tail_exponent(&self) -> f64 {
        2.0 * self.alpha + 2.0 * self.beta() - 1.0
    }

    /// Whether `Σ d_j^2 / x_j^2` converges.
    pub fn is_convergent(&self) -> bool {
        self.tail_exponent() > 0.0
    }

    /// `ρ_J = 1 - σ / (a (J - b)^α)`, so that `x(s) >= a (s-b)^α ρ_J` on `s >= J`.
    fn rho(&self, j: f64) -> f64 {
        1.0 - self.shift / (self.scale * self.power(j - self.offset))
    }

    pub fn tail_method(&self) -> TailMethod {
        if self.shift == 0.0 && !self.weighted {
            TailMethod::ClosedForm
        } else {
            TailMethod::IntegralTest
        }
    }

    /// Upper bound on `Σ_{i>j} t_i` via `∫_j^∞ t(s) ds`; `+∞` for divergent
    /// families. Requires `j >= 1`.
    pub fn tail_upper(&self, j: usize) -> f64 {
        debug_assert!(j >= 1);
        if !self.is_convergent() {
            return f64::INFINITY;
        }
        let q = self.tail_exponent();
        let jf = j as f64;
        let rho = self.rho(jf);
        (jf - self.offset).powf(-q) / (q * self.scale * self.scale * rho * rho)
    }

    /// Lower bound on `Σ_{i>j} t_i` via `∫_{j+1}^∞ s^-(q+1) / a^2 ds`.
    pub fn tail_lower(&self, j: usize) -> f64 {
        if !self.is_convergent() {
            return f64::INFINITY;
        }
        let q = self.tail_exponent();
        (j as f64 + 1.0).powf(-q) / (q * self.scale * self.scale)
    }

    fn mass_upper(&self, k: usize) -> f64 {
        if self.weighted {
            std::f64::consts::PI * std::f64::consts::PI / 6.0
        } else {
            k as f64
        }
    }

    fn mass_lower(&self, k: usize) -> f64 {
        if self.weighted {
            1.0
        } else {
            k as f64
        }
    }

    /// Nonincreasing majorant of `M(x_k) = Σ_{i>=k} t_i`.
    fn m_upper(&self, k: usize) -> f64 {
        if !self.is_convergent() {
            return f64::INFINITY;
        }
        let q = self.tail_exponent();
        let kf = k as f64;
        let rho = self.rho(kf);
        let base = kf - self.offset;
        let head = base.powf(-(q + 1.0)) / (self.scale * self.scale * rho * rho);
        head + self.tail_upper(k)
    }

    fn m_lower(&self, k: usize) -> f64 {
        if !self.is_convergent() {
            return f64::INFINITY;
        }
        let q = self.tail_exponent();
        (k as f64).powf(-q) / (q * self.scale * self.scale)
    }

    /// Exponent `p` with `N(x_k) M(x_k) ≍ k^p`.
    pub fn product_exponent(&self) -> f64 {
        if self.weighted {
            -self.tail_exponent()
        } else {
            1.0 - self.tail_exponent()
        }
    }

    /// Upper bound on `N(x_k) M(x_k)`.
    pub fn product_upper(&self, k: usize) -> f64 {
        self.mass_upper(k) * self.m_upper(k)
    }

    /// Lower bound on `N(x_k) M(x_k)`.
    pub fn product_lower(&self, k: usize) -> f64 {
        self.mass_lower(k) * self.m_lower(k)
    }

    /// Upper bound on `sup_{k >= k0} N(x_k) M(x_k)`, which also dominates
    /// `sup_{K >= k0} N(x_K) M(x_{K+1})`. Infinite when the products grow.
    pub fn product_sup_from(&self, k0: usize) -> f64 {
        if !self.is_convergent() || self.product_exponent() > 0.0 {
            f64::INFINITY
        } else {
            // product_upper is nonincreasing once the exponent is <= 0
            self.product_upper(k0.max(1))
        }
    }

    /// `d_j / sqrt(x_j)`; tends to zero for every power law since `x_j` is
    /// unbounded and `d_j <= 1`.
    pub fn weight_over_sqrt_node(&self, j: usize) -> f64 {
        self.weight(j) / self.node(j).sqrt()
    }

    /// Smallest index `i >= 1` with `x_i >= x`.
    pub fn first_index_at_or_above(&self, x: f64) -> usize {
        if x <= self.node(1) {
            return 1;
        }
        let guess = ((x + self.shift) / self.scale).powf(1.0 / self.alpha) + self.offset;
        let mut i = if guess.is_finite() && guess < 1e15 {
            (guess.ceil() as usize).max(1)
        } else {
            1
        };
        while i > 1 && self.node(i - 1) >= x {
            i -= 1;
        }
        while self.node(i) < x {
            i += 1;
        }
        i
    }

    /// Largest index `i` with `x_i <= x` (0 when none).
    pub fn last_index_at_or_below(&self, x: f64) -> usize {
        let first = self.first_index_at_or_above(x);
        if self.node(first) == x {
            first
        } else {
            first - 1
        }
    }
}

/// `N(x_k) M(x_k)` decays like `k^exponent` with
/// `lower_constant · k^p <= N(x_k) M(x_k) <= upper_constant · k^p` for all `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayCertificate {
    pub exponent: f64,
    pub lower_constant: f64,
    pub upper_constant: f64,
}

/// Bounds on the infinite tail of the series that `N` or `M` leaves open.
///
/// For an increasing sequence the open series is `Σ d_j^2 / x_j^2` (needed by
/// `M`); for a decreasing one it is `Σ d_j^2` (needed by `N`). Both are the
/// same numbers, because the reciprocal transform maps one onto the other.
#[derive(Debug, Clone, PartialEq)]
pub struct TailOracle {
    source: OracleSource,
}

#[derive(Debug, Clone, PartialEq)]
enum OracleSource {
    Law { law: PowerLaw, reciprocal: bool },
    Finite(Vec<(f64, f64)>),
}

impl TailOracle {
    pub fn method(&self) -> TailMethod {
        match &self.source {
            OracleSource::Law { law, .. } => law.tail_method(),
            OracleSource::Finite(_) => TailMethod::ExactFinite,
        }
    }

    pub fn is_convergent(&self) -> bool {
        match &self.source {
            OracleSource::Law { law, .. } => law.is_convergent(),
            OracleSource::Finite(_) => true,
        }
    }

    /// Upper bound on the open series beyond index `j` (`j >= 1`).
    pub fn upper_tail_after(&self, j: usize) -> f64 {
        match &self.source {
            OracleSource::Law { law, .. } => law.tail_upper(j.max(1)),
            OracleSource::Finite(pairs) => {
                pairs.iter().skip(j).map(|&(x, d)| (d / x) * (d / x)).sum()
            }
        }
    }

    /// Lower bound on the open series beyond index `j`.
    pub fn lower_tail_after(&self, j: usize) -> f64 {
        match &self.source {
            OracleSource::Law { law, .. } => law.tail_lower(j),
            OracleSource::Finite(_) => self.upper_tail_after(j),
        }
    }

    /// Upper bound on the full `M(x) = Σ_{x_j >= x} d_j^2 / x_j^2`.
    pub fn upper_tail_m(&self, x: f64) -> f64 {
        match &self.source {
            OracleSource::Law {
                law,
                reciprocal: false,
            } => {
                let first = law.first_index_at_or_above(x);
                law.term(first) + law.tail_upper(first)
            }
            // M of the reciprocal sequence is N(1/x) of the base: a finite sum.
            OracleSource::Law {
                law,
                reciprocal: true,
            } => {
                let last = law.last_index_at_or_below(1.0 / x);
                (1..=last).map(|j| law.weight(j) * law.weight(j)).sum()
            }
            OracleSource::Finite(pairs) => pairs
                .iter()
                .filter(|&&(xj, _)| xj >= x)
                .map(|&(xj, d)| (d / xj) * (d / xj))
                .sum(),
        }
    }
}

/// A node/weight sequence. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeWeightSequence {
    family: Family,
    reciprocal: bool,
}

impl NodeWeightSequence {
    pub fn standard() -> Self {
        Self::builtin(Family::Standard)
    }

    pub fn weighted_standard() -> Self {
        Self::builtin(Family::WeightedStandard)
    }

    pub fn odd_linear() -> Self {
        Self::builtin(Family::OddLinear)
    }

    pub fn squared_odd() -> Self {
        Self::builtin(Family::SquaredOdd)
    }

    /// `x_i = i^alpha - shift` with `alpha > 0` and `shift ∈ (0, 1)`.
    pub fn power_alpha(alpha: f64, shift: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be a positive real, got {alpha}"
            )));
        }
        if !(shift > 0.0 && shift < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "shift must lie in (0, 1), got {shift}"
            )));
        }
        Ok(Self::builtin(Family::PowerAlpha { alpha, shift }))
    }

    /// A finite sequence; nodes must be positive and pairwise distinct,
    /// weights nonnegative.
    pub fn custom(pairs: Vec<(f64, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidParameter("custom sequence is empty".into()));
        }
        for (index, &(x, d)) in pairs.iter().enumerate() {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::InvalidPair {
                    index,
                    reason: format!("node must be a positive finite number, got {x}"),
                });
            }
            if !(d.is_finite() && d >= 0.0) {
                return Err(Error::InvalidPair {
                    index,
                    reason: format!("weight must be a nonnegative finite number, got {d}"),
                });
            }
        }
        check_distinct(pairs.iter().map(|p| p.0))?;
        Ok(NodeWeightSequence {
            family: Family::CustomFinite(pairs),
            reciprocal: false,
        })
    }

    /// Resolves a family by its command-line name.
    pub fn from_name(name: &str, alpha: Option<f64>, shift: Option<f64>) -> Result<Self> {
        let takes_params = name == "power";
        if !takes_params && (alpha.is_some() || shift.is_some()) {
            return Err(Error::InvalidParameter(format!(
                "alpha/shift only apply to the power family, not {name:?}"
            )));
        }
        match name {
            "standard" => Ok(Self::standard()),
            "weighted-standard" => Ok(Self::weighted_standard()),
            "odd-linear" => Ok(Self::odd_linear()),
            "squared-odd" => Ok(Self::squared_odd()),
            "power" => {
                let alpha = alpha.ok_or_else(|| {
                    Error::InvalidParameter("the power family needs alpha".into())
                })?;
                Self::power_alpha(alpha, shift.unwrap_or(0.5))
            }
            other => Err(Error::InvalidParameter(format!("unknown family {other:?}"))),
        }
    }

    fn builtin(family: Family) -> Self {
        NodeWeightSequence {
            family,
            reciprocal: false,
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Whether this is a built-in family viewed through `(1/x, d/x)`.
    pub fn is_reciprocal(&self) -> bool {
        self.reciprocal
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.family, Family::CustomFinite(_))
    }

    /// Number of pairs for finite sequences.
    pub fn len(&self) -> Option<usize> {
        match &self.family {
            Family::CustomFinite(pairs) => Some(pairs.len()),
            _ => None,
        }
    }

    pub fn power_law(&self) -> Option<PowerLaw> {
        let law = match self.family {
            Family::Standard => PowerLaw::new(1.0, 0.5, 1.0, 0.0, false),
            Family::PowerAlpha { alpha, shift } => PowerLaw::new(1.0, 0.0, alpha, shift, false),
            Family::WeightedStandard => PowerLaw::new(1.0, 0.5, 1.0, 0.0, true),
            Family::OddLinear => PowerLaw::new(2.0, 0.5, 1.0, 0.0, false),
            Family::SquaredOdd => PowerLaw::new(4.0, 0.5, 2.0, 0.0, false),
            Family::CustomFinite(_) => return None,
        };
        Some(law)
    }

    /// The `i`-th pair (1-based); `None` past the end of a finite sequence.
    pub fn pair(&self, i: usize) -> Option<(f64, f64)> {
        debug_assert!(i >= 1);
        match &self.family {
            Family::CustomFinite(pairs) => pairs.get(i.wrapping_sub(1)).copied(),
            _ => {
                let law = self.power_law()?;
                let (x, d) = (law.node(i), law.weight(i));
                Some(if self.reciprocal {
                    (1.0 / x, d / x)
                } else {
                    (x, d)
                })
            }
        }
    }

    /// The first `k` pairs.
    pub fn eval_prefix(&self, k: usize) -> Result<Vec<(f64, f64)>> {
        if k == 0 {
            return Err(Error::InvalidParameter("prefix length must be >= 1".into()));
        }
        if let Family::CustomFinite(pairs) = &self.family {
            if pairs.len() < k {
                return Err(Error::PrefixTooShort {
                    requested: k,
                    available: pairs.len(),
                });
            }
            return Ok(pairs[..k].to_vec());
        }
        Ok((1..=k).filter_map(|i| self.pair(i)).collect())
    }

    /// All pairs of a finite sequence, or the first `k` of an infinite one.
    pub fn window(&self, k: usize) -> Vec<(f64, f64)> {
        match &self.family {
            Family::CustomFinite(pairs) => pairs.iter().take(k).copied().collect(),
            _ => (1..=k).filter_map(|i| self.pair(i)).collect(),
        }
    }

    pub fn monotonicity(&self) -> Monotonicity {
        match &self.family {
            Family::CustomFinite(pairs) => {
                detect_monotone_prefix(pairs).unwrap_or(Monotonicity::Unsorted)
            }
            _ if self.reciprocal => Monotonicity::Decreasing,
            _ => Monotonicity::Increasing,
        }
    }

    /// `(x, d) -> (1/x, d/x)`; leaves every matrix entry unchanged and flips
    /// the monotonicity.
    pub fn reciprocal_transform(&self) -> Self {
        match &self.family {
            Family::CustomFinite(pairs) => NodeWeightSequence {
                family: Family::CustomFinite(
                    pairs.iter().map(|&(x, d)| (1.0 / x, d / x)).collect(),
                ),
                reciprocal: false,
            },
            family => NodeWeightSequence {
                family: family.clone(),
                reciprocal: !self.reciprocal,
            },
        }
    }

    pub fn tail_oracle(&self) -> TailOracle {
        let source = match &self.family {
            Family::CustomFinite(pairs) => OracleSource::Finite(pairs.clone()),
            _ => OracleSource::Law {
                law: self.power_law().expect("built-in family"),
                reciprocal: self.reciprocal,
            },
        };
        TailOracle { source }
    }

    /// Certificate for `N(x_k) M(x_k) ≍ k^p`; absent for finite sequences and
    /// for families whose `M` diverges. Index-wise products are invariant
    /// under the reciprocal transform, so reciprocal views share it.
    pub fn decay_certificate(&self) -> Option<DecayCertificate> {
        let law = self.power_law()?;
        if !law.is_convergent() {
            return None;
        }
        let exponent = law.product_exponent();
        Some(DecayCertificate {
            exponent,
            lower_constant: law.product_lower(1),
            upper_constant: law.product_upper(1),
        })
    }

    pub fn product_decay_exponent(&self) -> Option<f64> {
        self.decay_certificate().map(|c| c.exponent)
    }

    /// Short machine-friendly name, e.g. `power(alpha=2,shift=0.5)`.
    pub fn name(&self) -> String {
        let base = match &self.family {
            Family::Standard => "standard".to_string(),
            Family::PowerAlpha { alpha, shift } => format!("power(alpha={alpha},shift={shift})"),
            Family::WeightedStandard => "weighted-standard".to_string(),
            Family::OddLinear => "odd-linear".to_string(),
            Family::SquaredOdd => "squared-odd".to_string(),
            Family::CustomFinite(pairs) => format!("custom(n={})", pairs.len()),
        };
        if self.reciprocal {
            format!("reciprocal({base})")
        } else {
            base
        }
    }
}

impl fmt::Display for NodeWeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn check_distinct(nodes: impl Iterator<Item = f64>) -> Result<()> {
    let mut sorted: Vec<f64> = nodes.collect();
    sorted.sort_by(f64::total_cmp);
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateNode(w[0]));
        }
    }
    Ok(())
}

/// Increasing iff the nodes strictly ascend, Decreasing iff they strictly
/// descend, Unsorted otherwise. A single pair counts as increasing.
pub fn detect_monotone_prefix(pairs: &[(f64, f64)]) -> Result<Monotonicity> {
    if pairs.is_empty() {
        return Err(Error::InvalidParameter("empty prefix".into()));
    }
    check_distinct(pairs.iter().map(|p| p.0))?;
    let ascending = pairs.windows(2).all(|w| w[0].0 < w[1].0);
    let descending = pairs.windows(2).all(|w| w[0].0 > w[1].0);
    Ok(if ascending {
        Monotonicity::Increasing
    } else if descending {
        Monotonicity::Decreasing
    } else {
        Monotonicity::Unsorted
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilySelector {
    family: String,
    #[serde(default)]
    params: FamilyParams,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyParams {
    alpha: Option<f64>,
    shift: Option<f64>,
    #[serde(default)]
    reciprocal: bool,
}

/// Parses a sequence description: either a JSON family selector
/// `{"family": "power", "params": {"alpha": 2}}` or whitespace-separated
/// `x d` lines with `#` comments.
pub fn parse_sequence(text: &str) -> Result<NodeWeightSequence> {
    if text.trim_start().starts_with('{') {
        let selector: FamilySelector = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        let seq = NodeWeightSequence::from_name(
            &selector.family,
            selector.params.alpha,
            selector.params.shift,
        )?;
        return Ok(if selector.params.reciprocal {
            seq.reciprocal_transform()
        } else {
            seq
        });
    }

    let mut pairs = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected two fields `x d`, found {}", fields.len()),
            });
        }
        let parse = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("cannot parse {what} {s:?}"),
            })
        };
        let x = parse(fields[0], "node")?;
        let d = parse(fields[1], "weight")?;
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::Parse {
                line,
                message: format!("node must be positive, got {x}"),
            });
        }
        if !(d.is_finite() && d >= 0.0) {
            return Err(Error::Parse {
                line,
                message: format!("weight must be nonnegative, got {d}"),
            });
        }
        pairs.push((x, d));
    }
    if pairs.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no pairs found".into(),
        });
    }
    NodeWeightSequence::custom(pairs)
}
