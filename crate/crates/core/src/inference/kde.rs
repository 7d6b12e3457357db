//! Gaussian kernel density estimation with optional boundary reflection.

use super::SampleData;
use crate::error::{PegfError, Result};
use crate::quadrature::QuadratureConfig;

/// Kernel mass beyond this many bandwidths is ignored.
const CUTOFF: f64 = 8.5;
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorMethod {
    /// `(1/n) Σ f̂(X_i)^(s-1) 1{X_i <= t}`.
    Moment,
    /// `∫ f̂^s` over `(min X, t)`.
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    /// `0.9 min(sd, IQR/1.34) n^(-1/5)`.
    Silverman,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    /// Mirror kernel mass at the lower boundary: zero for nonnegative
    /// samples, the sample minimum otherwise.
    Reflect,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub method: EstimatorMethod,
    pub bandwidth: Bandwidth,
    pub boundary: Boundary,
    pub quadrature: QuadratureConfig,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            method: EstimatorMethod::Moment,
            bandwidth: Bandwidth::Silverman,
            boundary: Boundary::Reflect,
            quadrature: QuadratureConfig { abs_tol: 1e-9, rel_tol: 1e-7, ..QuadratureConfig::default() },
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        if let Bandwidth::Fixed(h) = self.bandwidth {
            if !(h.is_finite() && h > 0.0) {
                return Err(PegfError::InvalidParameter(format!("fixed bandwidth must be positive, got {h}")));
            }
        }
        self.quadrature.validate()
    }
}

/// A fitted Gaussian KDE borrowing the sample.
#[derive(Debug, Clone)]
pub struct Kde<'a> {
    data: &'a [f64],
    h: f64,
    reflect_at: Option<f64>,
}

fn silverman(sample: &SampleData) -> f64 {
    let n = sample.n() as f64;
    let mean = sample.values().iter().sum::<f64>() / n;
    let var = sample.values().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let sd = var.sqrt();
    let iqr = sample.quantile(0.75) - sample.quantile(0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    0.9 * spread * n.powf(-0.2)
}

impl<'a> Kde<'a> {
    pub fn new(sample: &'a SampleData, cfg: &EstimatorConfig) -> Result<Self> {
        cfg.validate()?;
        if sample.max() == sample.min() {
            return Err(PegfError::DegenerateSample);
        }
        let h = match cfg.bandwidth {
            Bandwidth::Silverman => silverman(sample),
            Bandwidth::Fixed(h) => h,
        };
        let reflect_at = match cfg.boundary {
            Boundary::Reflect => Some(if sample.min() >= 0.0 { 0.0 } else { sample.min() }),
            Boundary::None => None,
        };
        Ok(Self { data: sample.values(), h, reflect_at })
    }

    pub fn bandwidth(&self) -> f64 {
        self.h
    }

    fn window_sum(&self, x: f64, lo: f64, hi: f64, mirror: Option<f64>) -> f64 {
        let start = self.data.partition_point(|&v| v < lo);
        let end = self.data.partition_point(|&v| v <= hi);
        self.data[start..end]
            .iter()
            .map(|&v| {
                let centre = mirror.map_or(v, |m| 2.0 * m - v);
                let u = (x - centre) / self.h;
                (-0.5 * u * u).exp()
            })
            .sum()
    }

    pub fn density(&self, x: f64) -> f64 {
        let reach = CUTOFF * self.h;
        let mut total = self.window_sum(x, x - reach, x + reach, None);
        if let Some(m) = self.reflect_at {
            if x < m {
                return 0.0;
            }
            let mirrored = 2.0 * m - x;
            total += self.window_sum(x, mirrored - reach, mirrored + reach, Some(m));
        }
        total * INV_SQRT_2PI / (self.data.len() as f64 * self.h)
    }
}

/// Kernel density estimate at `x`.
pub fn kde_density(sample: &SampleData, x: f64, cfg: &EstimatorConfig) -> Result<f64> {
    Ok(Kde::new(sample, cfg)?.density(x))
}
