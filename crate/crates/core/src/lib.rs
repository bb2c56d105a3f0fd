//! Generalized Hilbert matrices `H[i,j] = d_i d_j / (x_i + x_j)`.
//!
//! The crate classifies the operator induced on `ℓ²` (well-defined, bounded,
//! compact, injective, closed range) from the Muckenhoupt products
//! `N(x_k) M(x_k)`, applies `H` and its Cesàro-Hardy and sampled-Laplace
//! relatives on truncations, and brackets the singular values between a
//! Cauchy-determinant lower bound and the tail functional `B̃(k)`.
//!
//! ```
//! use genhilbert::{classify, NodeWeightSequence, Verdict};
//!
//! let report = classify::classify(&NodeWeightSequence::standard(), 10_000);
//! assert_eq!(report.bounded, Verdict::Yes);
//! assert_eq!(report.compact, Verdict::No);
//! ```

pub mod classify;
pub mod cli;
pub mod error;
pub mod muckenhoupt;
pub mod operators;
pub mod sequences;
pub mod spectral;

pub use classify::{ClassificationReport, Verdict};
pub use error::{Error, Result};
pub use muckenhoupt::{BoundInterval, Provenance};
pub use operators::TruncatedHilbertMatrix;
pub use sequences::{Family, Monotonicity, NodeWeightSequence};
pub use spectral::SpectralSandwich;

/// Default number of indices scanned before an analytic tail closure.
pub const DEFAULT_SCAN: usize = 10_000;
