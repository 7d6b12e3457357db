//! Tabulated PEGF curves and their CSV interchange format.
//!
//! ```text
//! # s=2.0
//! # support_high=2.0
//! # source=quadrature uniform(a=0,b=2)
//! t,value
//! 0.05,20.0
//! ```

use std::fmt::Write as _;

use crate::egf::SOrder;
use crate::error::{PegfError, Result};

/// A PEGF of fixed order tabulated on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EgfCurve {
    s: SOrder,
    t_grid: Vec<f64>,
    values: Vec<f64>,
    support_high: f64,
    source: String,
}

impl EgfCurve {
    pub fn new(s: SOrder, t_grid: Vec<f64>, values: Vec<f64>, support_high: f64, source: String) -> Result<Self> {
        if t_grid.len() != values.len() {
            return Err(PegfError::InvalidParameter(format!(
                "grid has {} points but {} values",
                t_grid.len(),
                values.len()
            )));
        }
        if t_grid.len() < 2 {
            return Err(PegfError::GridTooCoarse { points: t_grid.len(), required: 2 });
        }
        if t_grid.iter().any(|t| !t.is_finite()) || t_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(PegfError::InvalidParameter("t grid must be finite and strictly increasing".into()));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(PegfError::InvalidParameter(format!("curve values must be positive, found {v}")));
        }
        if support_high.is_nan() || support_high < t_grid[t_grid.len() - 1] {
            return Err(PegfError::InvalidParameter(format!(
                "support_high {support_high} lies below the last grid point"
            )));
        }
        let source = source.replace(['\n', '\r'], " ");
        Ok(Self { s, t_grid, values, support_high, source })
    }

    pub fn s(&self) -> SOrder {
        self.s
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Point where `F = 1`; `+inf` for unbounded supports.
    pub fn support_high(&self) -> f64 {
        self.support_high
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn with_support_high(mut self, support_high: f64) -> Result<Self> {
        if support_high.is_nan() || support_high < self.t_grid[self.t_grid.len() - 1] {
            return Err(PegfError::InvalidParameter(format!(
                "support_high {support_high} lies below the last grid point"
            )));
        }
        self.support_high = support_high;
        Ok(self)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# s={:?}", self.s.value());
        let _ = writeln!(out, "# support_high={:?}", self.support_high);
        let _ = writeln!(out, "# source={}", self.source);
        out.push_str("t,value\n");
        for (t, v) in self.t_grid.iter().zip(&self.values) {
            let _ = writeln!(out, "{t:?},{v:?}");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut s = None;
        let mut support_high = None;
        let mut source = String::new();
        let mut header_seen = false;
        let mut t_grid = Vec::new();
        let mut values = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((key, value)) = comment.split_once('=') {
                    let value = value.trim();
                    match key.trim() {
                        "s" => s = Some(parse_num(value, lineno)?),
                        "support_high" => support_high = Some(parse_num(value, lineno)?),
                        "source" => source = value.to_string(),
                        _ => {}
                    }
                }
                continue;
            }
            if !header_seen {
                if line.replace(' ', "") != "t,value" {
                    return Err(PegfError::Parse(format!("line {}: expected header `t,value`", lineno + 1)));
                }
                header_seen = true;
                continue;
            }
            let (t, v) = line
                .split_once(',')
                .ok_or_else(|| PegfError::Parse(format!("line {}: expected `t,value`", lineno + 1)))?;
            t_grid.push(parse_num(t, lineno)?);
            values.push(parse_num(v, lineno)?);
        }
        let s = s.ok_or_else(|| PegfError::Parse("missing `# s=` line".into()))?;
        let support_high = support_high.ok_or_else(|| PegfError::Parse("missing `# support_high=` line".into()))?;
        Self::new(SOrder::new(s)?, t_grid, values, support_high, source)
    }
}

fn parse_num(text: &str, lineno: usize) -> Result<f64> {
    text.trim().parse().map_err(|_| PegfError::Parse(format!("line {}: bad number `{}`", lineno + 1, text.trim())))
}
