//! Optimal Pinsker-type bounds between divergences and the trace distance.
//!
//! Every bound reduces to a two-parameter problem over pairs of binary
//! classical states `diag(r, 1 - r)`, `diag(s, 1 - s)`. For a slope `lambda`
//! the optimal linear bound is
//!
//! ```text
//! L(lambda) = min over 0 <= s <= r <= 1 of D_bin(r || s) - lambda (r - s)
//! ```
//!
//! and the optimal convex bound is its transform
//! `B(T) = sup over lambda of L(lambda) + lambda T`.
//!
//! ```
//! use pinsker::{analytic, catalog::DivergenceSpec};
//!
//! let b = analytic::convex_bound_analytic(&DivergenceSpec::Max, 0.5).unwrap();
//! assert_eq!(b.value(), Some(1.0));
//! ```

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod catalog;
pub mod cli;
pub mod engine;
pub mod error;
pub mod quantum;
pub mod simplex;
pub mod verify;

pub use analytic::{Analytic, ParametrizedPoint, PiecewiseBound};
pub use catalog::{BinaryPair, DivergenceSpec, Family, XReal};
pub use engine::{Chain, ConvexBound, LambdaGrid, LinearBound, Tangent};
pub use error::{Error, Result};
pub use quantum::{DensityMatrix, RenyiVariant, ScatterSample, StatePair};
