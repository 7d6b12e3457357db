use rayon::prelude::*;

use super::kde::{EstimatorConfig, EstimatorMethod, Kde};
use super::SampleData;
use crate::error::{PegfError, Result};
use crate::quadrature::integrate;

/// Proportion of observations `<= t`.
pub fn ecdf(sample: &SampleData, t: f64) -> f64 {
    sample.values().partition_point(|&v| v <= t) as f64 / sample.n() as f64
}

/// Plug-in estimates sharing one KDE fit.
///
/// The KDE evaluated at every observation is cached, so repeated
/// moment-form PEGF estimates at different `t` cost a prefix scan each.
#[derive(Debug, Clone)]
pub struct PlugInEstimator<'a> {
    sample: &'a SampleData,
    kde: Kde<'a>,
    cfg: EstimatorConfig,
    at_points: Option<Vec<f64>>,
}

impl<'a> PlugInEstimator<'a> {
    pub fn new(sample: &'a SampleData, cfg: &EstimatorConfig) -> Result<Self> {
        let kde = Kde::new(sample, cfg)?;
        let at_points = match cfg.method {
            EstimatorMethod::Moment => Some(sample.values().par_iter().map(|&x| kde.density(x)).collect()),
            EstimatorMethod::Quadrature => None,
        };
        Ok(Self { sample, kde, cfg: *cfg, at_points })
    }

    pub fn kde(&self) -> &Kde<'a> {
        &self.kde
    }

    fn ecdf_positive(&self, t: f64) -> Result<f64> {
        let f = ecdf(self.sample, t);
        if f > 0.0 {
            Ok(f)
        } else {
            Err(PegfError::OutOfSupport { x: t, low: self.sample.min(), high: self.sample.max() })
        }
    }

    pub fn pegf(&self, s: f64, t: f64) -> Result<f64> {
        if !(s.is_finite() && s >= 1.0) {
            return Err(PegfError::InvalidParameter(format!("order s must be >= 1, got {s}")));
        }
        let ft = self.ecdf_positive(t)?;
        let integral = match &self.at_points {
            Some(dens) => {
                let k = self.sample.values().partition_point(|&v| v <= t);
                dens[..k].iter().map(|d| d.powf(s - 1.0)).sum::<f64>() / self.sample.n() as f64
            }
            None => integrate(|x| self.kde.density(x).powf(s), self.sample.min(), t, &self.cfg.quadrature)?.value,
        };
        Ok(integral / ft.powf(s))
    }

    pub fn reversed_hazard(&self, t: f64) -> Result<f64> {
        let ft = self.ecdf_positive(t)?;
        Ok(self.kde.density(t) / ft)
    }
}

/// Plug-in PEGF estimate: KDE for `f`, empirical CDF for `F`.
pub fn pegf_estimate(sample: &SampleData, s: f64, t: f64, cfg: &EstimatorConfig) -> Result<f64> {
    PlugInEstimator::new(sample, cfg)?.pegf(s, t)
}

/// `f̂(t) / F̂(t)`.
pub fn reversed_hazard_estimate(sample: &SampleData, t: f64, cfg: &EstimatorConfig) -> Result<f64> {
    let f = ecdf(sample, t);
    if f <= 0.0 {
        return Err(PegfError::OutOfSupport { x: t, low: sample.min(), high: sample.max() });
    }
    Ok(Kde::new(sample, cfg)?.density(t) / f)
}
