//! Globally adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! Intervals are bisected in order of largest estimated error until the
//! summed error meets `max(abs_tol, rel_tol * |I|)` or the subdivision
//! budget runs out. Infinite limits are mapped onto finite ones:
//!
//! ```text
//! (-inf, b]:  x = b - u/(1-u),   u in [0, 1)
//! [a, +inf):  x = a + u/(1-u),   u in [0, 1)
//! (-inf,inf): x = u/(1-u^2),     u in (-1, 1)
//! ```
//!
//! The Kronrod rule is open, so endpoints are never evaluated.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{PegfError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Tolerances and limits for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Fraction of the integration range skipped at a singular lower endpoint.
    pub left_endpoint_offset: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-8, max_subdivisions: 2000, left_endpoint_offset: 1e-12 }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize, left_endpoint_offset: f64) -> Result<Self> {
        let cfg = Self { abs_tol, rel_tol, max_subdivisions, left_endpoint_offset };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Result<Self> {
        self.rel_tol = rel_tol;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.abs_tol) || !positive(self.rel_tol) {
            return Err(PegfError::InvalidParameter(format!(
                "quadrature tolerances must be positive (abs_tol={}, rel_tol={})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_subdivisions < 10 {
            return Err(PegfError::InvalidParameter(format!(
                "max_subdivisions must be at least 10, got {}",
                self.max_subdivisions
            )));
        }
        if !(positive(self.left_endpoint_offset) && self.left_endpoint_offset < 1.0) {
            return Err(PegfError::InvalidParameter(format!(
                "left_endpoint_offset must lie in (0, 1), got {}",
                self.left_endpoint_offset
            )));
        }
        Ok(())
    }
}

/// Value of a definite integral together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Segment { a, b, value, error }
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral> {
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0, subdivisions: 0 });
    }
    let first = kronrod(f, a, b);
    if !first.value.is_finite() {
        return Err(PegfError::QuadratureFailure { estimate: first.value, error_bound: f64::INFINITY });
    }
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 1;
    while total_err > cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
        if subdivisions >= cfg.max_subdivisions {
            return Err(PegfError::QuadratureFailure { estimate: total, error_bound: total_err });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Interval can no longer be split in floating point.
            heap.push(Segment { error: 0.0, ..worst });
            total_err -= worst.error;
            continue;
        }
        let left = kronrod(f, worst.a, mid);
        let right = kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        if !total.is_finite() {
            return Err(PegfError::QuadratureFailure { estimate: total, error_bound: f64::INFINITY });
        }
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
    // Re-sum to shed accumulated cancellation in the running totals.
    let value = heap.iter().map(|s| s.value).sum();
    let error = heap.iter().map(|s| s.error).sum();
    Ok(Integral { value, error, subdivisions })
}

/// Integrates `f` over `[a, b]`; either limit may be infinite.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral> {
    if a.is_nan() || b.is_nan() {
        return Err(PegfError::InvalidParameter("NaN integration limit".into()));
    }
    if a > b {
        let r = integrate(f, b, a, cfg)?;
        return Ok(Integral { value: -r.value, ..r });
    }
    let guard = |x: f64, jac: f64| -> f64 {
        if !x.is_finite() || jac == 0.0 {
            return 0.0;
        }
        let v = f(x);
        if v == 0.0 {
            0.0
        } else {
            v * jac
        }
    };
    match (a.is_finite(), b.is_finite()) {
        (true, true) => adaptive(&f, a, b, cfg),
        (false, true) => adaptive(
            &|u: f64| {
                let w = 1.0 - u;
                guard(b - u / w, 1.0 / (w * w))
            },
            0.0,
            1.0,
            cfg,
        ),
        (true, false) => adaptive(
            &|u: f64| {
                let w = 1.0 - u;
                guard(a + u / w, 1.0 / (w * w))
            },
            0.0,
            1.0,
            cfg,
        ),
        (false, false) => adaptive(
            &|u: f64| {
                let w = 1.0 - u * u;
                guard(u / w, (1.0 + u * u) / (w * w))
            },
            -1.0,
            1.0,
            cfg,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let cfg = QuadratureConfig::default();
        let r = integrate(|x| x.powi(5) - 3.0 * x, 0.0, 2.0, &cfg).unwrap();
        assert!((r.value - (64.0 / 6.0 - 6.0)).abs() < 1e-13);
    }

    #[test]
    fn semi_infinite_ranges() {
        let cfg = QuadratureConfig::default();
        let r = integrate(|x: f64| (-x).exp(), 0.0, f64::INFINITY, &cfg).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
        let l = integrate(|x: f64| x.exp(), f64::NEG_INFINITY, 0.0, &cfg).unwrap();
        assert!((l.value - 1.0).abs() < 1e-10);
        let g = integrate(|x: f64| (-x * x).exp(), f64::NEG_INFINITY, f64::INFINITY, &cfg).unwrap();
        assert!((g.value - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn algebraic_endpoint_singularity() {
        let cfg = QuadratureConfig::default();
        let r = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, &cfg).unwrap();
        assert!((r.value - 2.0).abs() < 1e-7, "{}", r.value);
    }

    #[test]
    fn reversed_limits_negate() {
        let cfg = QuadratureConfig::default();
        let r = integrate(|x: f64| x.sin(), 1.0, 0.0, &cfg).unwrap();
        assert!((r.value + (1.0 - 1f64.cos())).abs() < 1e-13);
    }

    #[test]
    fn budget_exhaustion_reports_best_estimate() {
        let cfg = QuadratureConfig { max_subdivisions: 10, ..Default::default() };
        let err = integrate(|x: f64| (1.0 / x).sin() / x, 1e-6, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, PegfError::QuadratureFailure { .. }));
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::new(0.0, 1e-8, 100, 1e-12).is_err());
        assert!(QuadratureConfig::new(1e-10, 1e-8, 5, 1e-12).is_err());
        assert!(QuadratureConfig::new(1e-10, 1e-8, 100, 0.0).is_err());
        assert!(QuadratureConfig::new(1e-10, 1e-8, 100, 1e-12).is_ok());
    }
}
