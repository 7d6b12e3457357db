//! Sample-based estimation of the PEGF and a goodness-of-fit test for the
//! power distribution `F(x) = x^c` on `(0, 1)`.
//!
//! Under the power model the ratio `B_s(F; t) / λ(t)^(s-1)` equals
//! `c / (s(c-1) + 1)` for every `t`. The test statistic measures how far the
//! plug-in version of that ratio is from constant across interior sample
//! quantiles, and a parametric bootstrap from the fitted power model supplies
//! the p-value.

mod data;
mod estimate;
mod gof;
mod kde;

pub use data::SampleData;
pub use estimate::{ecdf, pegf_estimate, reversed_hazard_estimate, PlugInEstimator};
pub use gof::{
    derive_seed, fit_power_mle, power_gof_statistic, power_gof_statistic_exact, power_gof_test, GofConfig, GofReport,
};
pub use kde::{kde_density, Bandwidth, Boundary, EstimatorConfig, EstimatorMethod, Kde};
