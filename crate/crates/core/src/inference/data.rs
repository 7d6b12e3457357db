use std::fmt::Write as _;

use crate::error::{PegfError, Result};

/// Observations sorted ascending, with a note on where they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleData {
    values: Vec<f64>,
    origin: String,
}

impl SampleData {
    pub fn new(mut values: Vec<f64>, origin: impl Into<String>) -> Result<Self> {
        if values.len() < 2 {
            return Err(PegfError::InvalidParameter(format!(
                "a sample needs at least 2 observations, got {}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(PegfError::InvalidParameter(format!("non-finite observation {v}")));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values, origin: origin.into() })
    }

    /// Parses one number per line; blank lines and `#` comments are skipped.
    pub fn from_text(text: &str, origin: impl Into<String>) -> Result<Self> {
        let mut values = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let v: f64 =
                line.parse().map_err(|_| PegfError::Parse(format!("line {}: bad number `{line}`", lineno + 1)))?;
            values.push(v);
        }
        Self::new(values, origin)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.values {
            let _ = writeln!(out, "{v:?}");
        }
        out
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Sample quantile with linear interpolation between order statistics.
    pub fn quantile(&self, q: f64) -> f64 {
        let h = (self.n() - 1) as f64 * q.clamp(0.0, 1.0);
        let lo = h.floor() as usize;
        let hi = (lo + 1).min(self.n() - 1);
        self.values[lo] + (h - lo as f64) * (self.values[hi] - self.values[lo])
    }

    /// Divides every observation by `max (n+1)/n`, an estimate of the upper
    /// support endpoint that keeps the largest value strictly below 1.
    pub fn rescaled_to_max(&self) -> Result<Self> {
        let m = self.max();
        if !(m > 0.0) {
            return Err(PegfError::OutOfRange { value: m, range: "max > 0".into() });
        }
        let n = self.n() as f64;
        let scale = m * (n + 1.0) / n;
        Self::new(self.values.iter().map(|v| v / scale).collect(), format!("{} (rescaled by max)", self.origin))
    }
}
