//! Past entropy generating functions (PEGF) of lifetime distributions.
//!
//! For a lifetime `X` with density `f` and distribution function `F`, the
//! PEGF of order `s >= 1` at inspection time `t` is
//!
//! ```text
//! B_s(F; t) = ∫_low^t (f(x) / F(t))^s dx
//! ```
//!
//! the entropy generating function of the inactivity time `t - X | X <= t`.
//!
//! - [`catalog`]: parametric families with exact PEGFs and seeded sampling.
//! - [`egf`]: quadrature evaluation plus the past-entropy and reversed-hazard
//!   identities.
//! - [`reconstruct`]: recovering `λ(t)` and `F(t)` from a tabulated PEGF.
//! - [`inference`]: plug-in estimation from samples and a bootstrap
//!   goodness-of-fit test for the power distribution.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod curve;
pub mod egf;
pub mod error;
pub mod inference;
pub mod quadrature;
pub mod reconstruct;

pub use catalog::{DistributionSpec, Family};
pub use curve::EgfCurve;
pub use egf::SOrder;
pub use error::{PegfError, Result};
pub use quadrature::QuadratureConfig;
pub use reconstruct::{InitBranch, ReconstructionResult, RootSolveConfig};
