//! Five verdicts on the operator `H: ℓ² → ℓ²` with the evidence behind each.
//!
//! A `No` is only issued with an analytic witness (a decay exponent or a
//! divergent series); scans alone never refute anything.

use serde::Serialize;
use serde_json::{json, Value};

use crate::muckenhoupt::{muckenhoupt_product, ScanTable};
use crate::sequences::NodeWeightSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// Evidence for one verdict: which condition was checked and the numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub property: String,
    pub verdict: Verdict,
    pub condition: String,
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub verdict: Verdict,
    pub certificate: Certificate,
}

impl Check {
    fn new(property: &str, verdict: Verdict, condition: &str, witness: Value) -> Self {
        Check {
            verdict,
            certificate: Certificate {
                property: property.into(),
                verdict,
                condition: condition.into(),
                witness,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub well_defined: Verdict,
    pub bounded: Verdict,
    pub compact: Verdict,
    pub injective: Verdict,
    pub range_closed: Verdict,
    pub certificates: Vec<Certificate>,
    pub scan_window: usize,
}

impl ClassificationReport {
    pub fn verdicts(&self) -> [Verdict; 5] {
        [
            self.well_defined,
            self.bounded,
            self.compact,
            self.injective,
            self.range_closed,
        ]
    }

    pub fn has_unknown(&self) -> bool {
        self.verdicts().contains(&Verdict::Unknown)
    }

    /// Nashed's type: `"type-I"` (non-closed range, not compact) or
    /// `"type-II"` (non-closed range, compact).
    pub fn ill_posedness(&self) -> Option<&'static str> {
        match (self.range_closed, self.compact) {
            (Verdict::No, Verdict::No) => Some("type-I"),
            (Verdict::No, Verdict::Yes) => Some("type-II"),
            _ => None,
        }
    }

    /// The structural constraints every report satisfies.
    pub fn invariants_hold(&self) -> bool {
        (self.compact != Verdict::Yes || self.bounded == Verdict::Yes)
            && (self.bounded != Verdict::Yes || self.well_defined == Verdict::Yes)
            && (self.range_closed != Verdict::No || self.injective == Verdict::Yes)
            && self.injective != Verdict::No
    }
}

/// Operators whose verdicts coincide with those of `H`.
pub const COVERED_OPERATORS: [&str; 4] = [
    "hilbert",
    "cesaro-hardy",
    "cesaro-hardy-adjoint",
    "sampled-laplace",
];

fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn interval(b: &crate::muckenhoupt::BoundInterval) -> Value {
    serde_json::to_value(b).expect("interval serializes")
}

fn finite_dimensional(property: &str, seq: &NodeWeightSequence) -> Check {
    Check::new(
        property,
        Verdict::Yes,
        "finite-dimensional",
        json!({ "length": seq.len() }),
    )
}

pub fn check_well_defined(seq: &NodeWeightSequence, k_scan: usize) -> Check {
    const P: &str = "well_defined";
    let Some(law) = seq.power_law() else {
        return finite_dimensional(P, seq);
    };
    let q = law.tail_exponent();
    if law.is_convergent() {
        let first = muckenhoupt_product(seq, 1, k_scan).ok();
        Check::new(
            P,
            Verdict::Yes,
            "convergent-tail",
            json!({
                "tail_exponent": num(q),
                "tail_method": law.tail_method(),
                "product_at_1": first.as_ref().map(interval),
            }),
        )
    } else {
        let partial: f64 = (1..=k_scan.max(1)).map(|j| law.term(j)).sum();
        Check::new(
            P,
            Verdict::No,
            "divergent-series-integral-test",
            json!({
                "index": 1,
                "tail_exponent": num(q),
                "partial_sum_lower": num(partial),
                "terms": k_scan,
            }),
        )
    }
}

pub fn check_bounded(seq: &NodeWeightSequence, k_scan: usize) -> Check {
    const P: &str = "bounded";
    let Some(law) = seq.power_law() else {
        return finite_dimensional(P, seq);
    };
    if !law.is_convergent() {
        return Check::new(
            P,
            Verdict::No,
            "not-well-defined",
            json!({ "tail_exponent": num(law.tail_exponent()) }),
        );
    }
    let p = law.product_exponent();
    let table = ScanTable::new(seq, k_scan).ok();
    if p <= 0.0 {
        Check::new(
            P,
            Verdict::Yes,
            "product-supremum-finite",
            json!({
                "product_exponent": num(p),
                "sup_product": table.map(|t| interval(&t.sup_products(1))),
                "upper_constant": num(law.product_upper(1)),
            }),
        )
    } else {
        let k = k_scan.max(1);
        Check::new(
            P,
            Verdict::No,
            "product-growth",
            json!({
                "product_exponent": num(p),
                "index": k,
                "product_lower": num(law.product_lower(k)),
                "lower_constant": num(law.product_lower(1)),
            }),
        )
    }
}

pub fn check_compact(seq: &NodeWeightSequence, k_scan: usize) -> Check {
    const P: &str = "compact";
    let Some(law) = seq.power_law() else {
        return finite_dimensional(P, seq);
    };
    let bounded = check_bounded(seq, k_scan);
    if bounded.verdict == Verdict::No {
        return Check::new(
            P,
            Verdict::No,
            "unbounded",
            json!({ "bounded": Verdict::No }),
        );
    }
    let p = law.product_exponent();
    if p < 0.0 {
        let tail = ScanTable::new(seq, k_scan)
            .map(|t| interval(&t.sup_products(k_scan)))
            .ok();
        Check::new(
            P,
            Verdict::Yes,
            "product-decay",
            json!({
                "product_exponent": num(p),
                "upper_constant": num(law.product_upper(1)),
                "sup_product_from_scan_end": tail,
            }),
        )
    } else {
        Check::new(
            P,
            Verdict::No,
            "product-bounded-below",
            json!({
                "product_exponent": num(p),
                "lower_constant": num(law.product_lower(1)),
            }),
        )
    }
}

pub fn check_injective(seq: &NodeWeightSequence, k_scan: usize) -> Check {
    const P: &str = "injective";
    let monotone = seq.monotonicity().is_monotone();
    if let Some(n) = seq.len() {
        let window = seq.window(n);
        let positive = window.iter().all(|p| p.1 > 0.0);
        // distinct positive nodes: the leading block of a Cauchy-type matrix
        // with positive weights is positive definite
        let verdict = if positive {
            Verdict::Yes
        } else {
            Verdict::Unknown
        };
        let condition = if positive {
            "positive-definite-finite"
        } else {
            "zero-weight"
        };
        return Check::new(
            P,
            verdict,
            condition,
            json!({ "length": n, "monotone": monotone }),
        );
    }
    let positive = seq.window(k_scan.max(1)).iter().all(|p| p.1 > 0.0);
    let bounded = check_bounded(seq, k_scan).verdict == Verdict::Yes;
    let verdict = if positive && bounded && monotone {
        Verdict::Yes
    } else {
        Verdict::Unknown
    };
    let condition = if verdict == Verdict::Yes {
        "positive-weights-bounded-monotone"
    } else {
        "hypotheses-not-met"
    };
    Check::new(
        P,
        verdict,
        condition,
        json!({
            "positive_weights": positive,
            "bounded": bounded,
            "monotone": monotone,
            "scanned": k_scan,
        }),
    )
}

/// Verdict on closedness of the range.
pub fn check_ill_posed(seq: &NodeWeightSequence, k_scan: usize) -> Check {
    const P: &str = "range_closed";
    let Some(law) = seq.power_law() else {
        return finite_dimensional(P, seq);
    };
    let injective = check_injective(seq, k_scan).verdict == Verdict::Yes;
    let bounded = check_bounded(seq, k_scan).verdict == Verdict::Yes;
    if !(injective && bounded) {
        return Check::new(
            P,
            Verdict::Unknown,
            "hypotheses-not-met",
            json!({ "injective": injective, "bounded": bounded }),
        );
    }
    // d_j / sqrt(x_j) ~ j^{-(β + α/2)} -> 0; the ratio is the same for the
    // reciprocal view, so one expression covers both orientations.
    let exponent = -((law.is_weighted() as u8) as f64 + law.alpha() / 2.0);
    let k = k_scan.max(1);
    Check::new(
        P,
        Verdict::No,
        "weight-over-sqrt-node-vanishes",
        json!({
            "decay_exponent": num(exponent),
            "index": k,
            "value": num(law.weight_over_sqrt_node(k)),
        }),
    )
}

pub fn classify(seq: &NodeWeightSequence, k_scan: usize) -> ClassificationReport {
    let checks = [
        check_well_defined(seq, k_scan),
        check_bounded(seq, k_scan),
        check_compact(seq, k_scan),
        check_injective(seq, k_scan),
        check_ill_posed(seq, k_scan),
    ];
    let mut certificates: Vec<Certificate> = checks.iter().map(|c| c.certificate.clone()).collect();
    certificates.push(Certificate {
        property: "operators".into(),
        verdict: Verdict::Yes,
        condition: "verdicts-transfer".into(),
        witness: json!({ "operators": COVERED_OPERATORS }),
    });
    let report = ClassificationReport {
        well_defined: checks[0].verdict,
        bounded: checks[1].verdict,
        compact: checks[2].verdict,
        injective: checks[3].verdict,
        range_closed: checks[4].verdict,
        certificates,
        scan_window: k_scan,
    };
    debug_assert!(report.invariants_hold(), "{report:?}");
    report
}
