use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Relative widening applied to every accumulated floating-point sum.
pub const RELATIVE_SLACK: f64 = 1e-12;

/// Where an interval came from, weakest last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Exact,
    TruncatedWithTail,
    /// Only the lower endpoint is backed by evidence.
    ScanOnly,
}

/// A nonnegative quantity known to lie in `[lower, upper]`; `upper` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInterval {
    pub lower: f64,
    pub upper: f64,
    pub provenance: Provenance,
}

impl BoundInterval {
    pub fn exact(value: f64) -> Self {
        BoundInterval {
            lower: value,
            upper: value,
            provenance: Provenance::Exact,
        }
    }

    pub fn zero() -> Self {
        Self::exact(0.0)
    }

    /// `[partial, partial + tail]`, widened outward by [`RELATIVE_SLACK`].
    pub fn truncated(partial: f64, tail: f64) -> Self {
        BoundInterval {
            lower: partial * (1.0 - RELATIVE_SLACK),
            upper: (partial + tail) * (1.0 + RELATIVE_SLACK),
            provenance: Provenance::TruncatedWithTail,
        }
    }

    pub fn scan_only(lower: f64) -> Self {
        BoundInterval {
            lower,
            upper: f64::INFINITY,
            provenance: Provenance::ScanOnly,
        }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn is_exact(&self) -> bool {
        self.provenance == Provenance::Exact
    }

    pub fn is_bounded(&self) -> bool {
        self.upper.is_finite()
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Geometric midpoint for positive finite intervals, else the lower end.
    pub fn midpoint(&self) -> f64 {
        if self.lower > 0.0 && self.upper.is_finite() {
            (self.lower * self.upper).sqrt()
        } else {
            self.lower
        }
    }

    fn combined(&self, other: &Self) -> Provenance {
        self.provenance.max(other.provenance)
    }

    fn widen(self) -> Self {
        if self.is_exact() {
            return self;
        }
        BoundInterval {
            lower: self.lower * (1.0 - RELATIVE_SLACK),
            upper: self.upper * (1.0 + RELATIVE_SLACK),
            provenance: self.provenance,
        }
    }

    /// Product of two nonnegative intervals. `0 · ∞` is taken as 0 only when
    /// the zero factor is exactly zero.
    pub fn mul(&self, other: &Self) -> Self {
        let upper =
            if (self.upper == 0.0 && self.is_exact()) || (other.upper == 0.0 && other.is_exact()) {
                0.0
            } else {
                self.upper * other.upper
            };
        BoundInterval {
            lower: self.lower * other.lower,
            upper,
            provenance: self.combined(other),
        }
        .widen()
    }

    pub fn add(&self, other: &Self) -> Self {
        BoundInterval {
            lower: self.lower + other.lower,
            upper: self.upper + other.upper,
            provenance: self.combined(other),
        }
        .widen()
    }

    /// Interval for `max(a, b)`.
    pub fn max(&self, other: &Self) -> Self {
        BoundInterval {
            lower: self.lower.max(other.lower),
            upper: self.upper.max(other.upper),
            provenance: self.combined(other),
        }
    }
}

impl Serialize for BoundInterval {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BoundInterval", 3)?;
        s.serialize_field("lower", &self.lower)?;
        if self.upper.is_finite() {
            s.serialize_field("upper", &self.upper)?;
        } else {
            s.serialize_field("upper", "inf")?;
        }
        s.serialize_field("provenance", &self.provenance)?;
        s.end()
    }
}
