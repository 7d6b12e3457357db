use std::fmt::Write as _;

use rayon::prelude::*;

use super::estimate::PlugInEstimator;
use super::kde::EstimatorConfig;
use super::SampleData;
use crate::catalog::DistributionSpec;
use crate::egf::{pegf, SOrder};
use crate::error::{PegfError, Result};
use crate::quadrature::QuadratureConfig;

/// Settings for [`power_gof_test`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GofConfig {
    pub s: f64,
    pub q_lo: f64,
    pub q_hi: f64,
    pub grid: usize,
    pub n_boot: usize,
    pub seed: u64,
    pub estimator: EstimatorConfig,
}

impl Default for GofConfig {
    fn default() -> Self {
        Self { s: 2.0, q_lo: 0.2, q_hi: 0.9, grid: 15, n_boot: 499, seed: 0, estimator: EstimatorConfig::default() }
    }
}

/// Outcome of the power-distribution goodness-of-fit test.
#[derive(Debug, Clone, PartialEq)]
pub struct GofReport {
    pub statistic: f64,
    pub p_value: f64,
    pub c_hat: f64,
    pub s: f64,
    pub n: usize,
    pub t_grid_quantiles: (f64, f64),
    pub n_boot: usize,
    pub seed: u64,
}

impl GofReport {
    pub const CSV_HEADER: &'static str = "statistic,p_value,c_hat,s,n,n_boot,seed";

    pub fn to_csv(&self) -> String {
        format!(
            "{}\n{:?},{:?},{:?},{:?},{},{},{}\n",
            Self::CSV_HEADER,
            self.statistic,
            self.p_value,
            self.c_hat,
            self.s,
            self.n,
            self.n_boot,
            self.seed
        )
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "power distribution goodness-of-fit (s = {})", self.s);
        let _ = writeln!(out, "  n = {}, fitted c = {:.6}", self.n, self.c_hat);
        let _ =
            writeln!(out, "  ratio grid: sample quantiles {} to {}", self.t_grid_quantiles.0, self.t_grid_quantiles.1);
        let _ = writeln!(out, "  statistic (CV of ratio) = {:.6}", self.statistic);
        let _ =
            writeln!(out, "  bootstrap p-value = {:.4} ({} replicates, seed {})", self.p_value, self.n_boot, self.seed);
        out
    }
}

/// Maximum-likelihood exponent of `F(x) = x^c`: `n / -Σ log X_i`.
pub fn fit_power_mle(sample: &SampleData) -> Result<f64> {
    if let Some(&v) = sample.values().iter().find(|&&v| !(v > 0.0 && v < 1.0)) {
        return Err(PegfError::OutOfRange { value: v, range: "(0, 1)".into() });
    }
    let neg_log_sum: f64 = sample.values().iter().map(|v| -v.ln()).sum();
    Ok(sample.n() as f64 / neg_log_sum)
}

fn check_grid(s: f64, q_lo: f64, q_hi: f64, m: usize) -> Result<()> {
    if !(s.is_finite() && s > 1.0) {
        return Err(PegfError::InvalidParameter(format!("the test needs s > 1, got {s}")));
    }
    if !(q_lo > 0.0 && q_lo < q_hi && q_hi < 1.0) {
        return Err(PegfError::InvalidParameter(format!("need 0 < q_lo < q_hi < 1, got ({q_lo}, {q_hi})")));
    }
    if m < 5 {
        return Err(PegfError::InvalidParameter(format!("need at least 5 grid points, got {m}")));
    }
    Ok(())
}

fn probability_grid(q_lo: f64, q_hi: f64, m: usize) -> impl Iterator<Item = f64> {
    (0..m).map(move |j| q_lo + (q_hi - q_lo) * j as f64 / (m - 1) as f64)
}

fn coefficient_of_variation(values: &[f64]) -> f64 {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    var.sqrt() / mean.abs()
}

/// Coefficient of variation of `B̂_s(t) / λ̂(t)^(s-1)` over sample quantiles.
pub fn power_gof_statistic(
    sample: &SampleData,
    s: f64,
    q_lo: f64,
    q_hi: f64,
    m: usize,
    cfg: &EstimatorConfig,
) -> Result<f64> {
    check_grid(s, q_lo, q_hi, m)?;
    let est = PlugInEstimator::new(sample, cfg)?;
    let ratios = probability_grid(q_lo, q_hi, m)
        .map(|q| {
            let t = sample.quantile(q);
            Ok(est.pegf(s, t)? / est.reversed_hazard(t)?.powf(s - 1.0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(coefficient_of_variation(&ratios))
}

/// The same statistic computed from a known distribution instead of a
/// sample: exact PEGF (closed form, or quadrature for custom densities) and
/// exact reversed hazard at the distribution's quantiles.
pub fn power_gof_statistic_exact(
    spec: &DistributionSpec,
    s: f64,
    q_lo: f64,
    q_hi: f64,
    m: usize,
    quad: &QuadratureConfig,
) -> Result<f64> {
    check_grid(s, q_lo, q_hi, m)?;
    let order = SOrder::new(s)?;
    let ratios = probability_grid(q_lo, q_hi, m)
        .map(|q| {
            let t = spec.quantile(q)?;
            let b = match spec.closed_form_pegf(s, t) {
                Err(PegfError::Unsupported(_)) => pegf(spec, order, t, quad)?,
                other => other?,
            };
            Ok(b / spec.reversed_hazard(t)?.powf(s - 1.0))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(coefficient_of_variation(&ratios))
}

/// Seed for bootstrap replicate `index`, mixed from the base seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    splitmix(seed ^ splitmix(index.wrapping_add(1)))
}

/// Parametric-bootstrap test of `H0: X ~ power(c)` for some `c > 0`.
///
/// Replicates run in parallel; each draws from its own seed, so the p-value
/// does not depend on scheduling.
pub fn power_gof_test(sample: &SampleData, cfg: &GofConfig) -> Result<GofReport> {
    check_grid(cfg.s, cfg.q_lo, cfg.q_hi, cfg.grid)?;
    if cfg.n_boot < 99 {
        return Err(PegfError::InvalidParameter(format!("need at least 99 bootstrap replicates, got {}", cfg.n_boot)));
    }
    let c_hat = fit_power_mle(sample)?;
    let observed = power_gof_statistic(sample, cfg.s, cfg.q_lo, cfg.q_hi, cfg.grid, &cfg.estimator)?;
    let null = DistributionSpec::power(c_hat)?;
    let n = sample.n();
    let replicates = (0..cfg.n_boot as u64)
        .into_par_iter()
        .map(|b| {
            let boot = null.sample(n, derive_seed(cfg.seed, b))?;
            power_gof_statistic(&boot, cfg.s, cfg.q_lo, cfg.q_hi, cfg.grid, &cfg.estimator)
        })
        .collect::<Result<Vec<_>>>()?;
    let exceed = replicates.iter().filter(|&&t| t >= observed).count();
    Ok(GofReport {
        statistic: observed,
        p_value: (1 + exceed) as f64 / (cfg.n_boot + 1) as f64,
        c_hat,
        s: cfg.s,
        n,
        t_grid_quantiles: (cfg.q_lo, cfg.q_hi),
        n_boot: cfg.n_boot,
        seed: cfg.seed,
    })
}
