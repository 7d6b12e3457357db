//! Entropy generating functions evaluated by quadrature.
//!
//! The past entropy generating function of order `s` at inspection time `t`
//! integrates the `s`-th power of the past-lifetime density `f(x)/F(t)` over
//! `(low, t]`. Its `s`-derivative at one is the negative past entropy, and it
//! obeys `B'(t) = λ(t)^s - s B(t) λ(t)` in `t`; both identities are exposed
//! as checkable quantities.

use crate::catalog::DistributionSpec;
use crate::curve::EgfCurve;
use crate::error::{PegfError, Result};
use crate::quadrature::{integrate, QuadratureConfig};

/// Order `s >= 1` of an entropy generating function.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SOrder(f64);

impl SOrder {
    pub fn new(s: f64) -> Result<Self> {
        if s.is_finite() && s >= 1.0 {
            Ok(Self(s))
        } else {
            Err(PegfError::InvalidParameter(format!("order s must be >= 1, got {s}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Integrates `g` from the lower support endpoint to `upper`.
///
/// `alpha` is the local exponent of `g` at a finite lower endpoint. A
/// singular endpoint (`alpha < 0`) is handled by the substitution
/// `x = low + W v^k` with `k = 1/(alpha+1)`, which makes the integrand
/// regular in `v`. The range below `low + eps` is skipped and restored with
/// the power-law tail `g(low+eps) eps / (alpha+1)`.
///
/// `g` receives both `x` and the exact offset `x - low`, since `low + h`
/// rounds away most of `h` when `low` is far from zero.
fn integrate_from_low<G: Fn(f64, f64) -> f64>(
    spec: &DistributionSpec,
    upper: f64,
    alpha: f64,
    cfg: &QuadratureConfig,
    g: G,
) -> Result<f64> {
    let (low, _) = spec.support();
    let plain = |x: f64| g(x, x - low);
    if !low.is_finite() {
        return Ok(integrate(plain, low, upper, cfg)?.value);
    }
    if alpha <= -1.0 {
        return Err(PegfError::NotIntegrable { exponent: alpha });
    }
    if alpha < 0.0 {
        let (width, rest) = if upper.is_finite() { (upper - low, 0.0) } else { (1.0, f64::NAN) };
        let eps = cfg.left_endpoint_offset * width;
        let k = 1.0 / (alpha + 1.0);
        let v0 = cfg.left_endpoint_offset.powf(alpha + 1.0);
        let body = integrate(
            |v| {
                let h = width * v.powf(k);
                let y = g(low + h, h);
                if y == 0.0 {
                    0.0
                } else {
                    y * width * k * v.powf(k - 1.0)
                }
            },
            v0,
            1.0,
            cfg,
        )?
        .value;
        let beyond = if rest.is_nan() { integrate(plain, low + 1.0, upper, cfg)?.value } else { rest };
        let tail = g(low + eps, eps) * eps / (alpha + 1.0);
        return Ok(body + beyond + if tail.is_finite() { tail } else { 0.0 });
    }
    Ok(integrate(plain, low, upper, cfg)?.value)
}

fn xlogx(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

/// Past entropy generating function by adaptive quadrature.
pub fn pegf(spec: &DistributionSpec, s: SOrder, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    spec.check_interior(t)?;
    let s = s.value();
    let ft = spec.cdf(t);
    let alpha = s * spec.lower_density_exponent();
    if alpha <= -1.0 {
        return Err(PegfError::NotIntegrable { exponent: alpha });
    }
    integrate_from_low(spec, t, alpha, cfg, |x, h| {
        let p = spec.pdf_near_low(x, h) / ft;
        if p > 0.0 {
            p.powf(s)
        } else {
            0.0
        }
    })
}

/// Entropy generating function `∫ f^s` over the whole support.
pub fn egf(spec: &DistributionSpec, s: SOrder, cfg: &QuadratureConfig) -> Result<f64> {
    let s = s.value();
    let (_, high) = spec.support();
    let alpha = s * spec.lower_density_exponent();
    if alpha <= -1.0 {
        return Err(PegfError::NotIntegrable { exponent: alpha });
    }
    integrate_from_low(spec, high, alpha, cfg, |x, h| {
        let f = spec.pdf_near_low(x, h);
        if f > 0.0 {
            f.powf(s)
        } else {
            0.0
        }
    })
}

/// Past entropy `-∫ (f/F(t)) log(f/F(t))` over `(low, t]`.
pub fn past_entropy(spec: &DistributionSpec, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    // Subtracting from zero keeps an exact zero entropy positive.
    Ok(0.0 - pegf_s_derivative_at_one(spec, t, cfg)?)
}

/// Past entropy through the reversed hazard rate:
/// `1 - (1/F(t)) ∫ f log λ` over `(low, t]`.
pub fn past_entropy_via_rhr(spec: &DistributionSpec, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    spec.check_interior(t)?;
    let ft = spec.cdf(t);
    let integral = integrate_from_low(spec, t, spec.lower_density_exponent(), cfg, |x, h| {
        let f = spec.pdf_near_low(x, h);
        if f <= 0.0 {
            return 0.0;
        }
        match spec.reversed_hazard_near_low(x, h) {
            Ok(lam) if lam > 0.0 => f * lam.ln(),
            _ => 0.0,
        }
    })?;
    Ok(1.0 - integral / ft)
}

/// `∂B_s/∂s` at `s = 1`, i.e. `∫ (f/F(t)) log(f/F(t))`.
pub fn pegf_s_derivative_at_one(spec: &DistributionSpec, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    spec.check_interior(t)?;
    let ft = spec.cdf(t);
    integrate_from_low(spec, t, spec.lower_density_exponent(), cfg, |x, h| xlogx(spec.pdf_near_low(x, h) / ft))
}

/// Absolute mismatch between a central difference of the PEGF in `t` and
/// the reversed-hazard form `λ^s - s B λ`.
pub fn rhr_identity_residual(
    spec: &DistributionSpec,
    s: SOrder,
    t: f64,
    dt: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(PegfError::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    spec.check_interior(t - dt)?;
    spec.check_interior(t + dt)?;
    let b = pegf(spec, s, t, cfg)?;
    let slope = (pegf(spec, s, t + dt, cfg)? - pegf(spec, s, t - dt, cfg)?) / (2.0 * dt);
    let lam = spec.reversed_hazard(t)?;
    let sv = s.value();
    Ok((slope - (lam.powf(sv) - sv * b * lam)).abs())
}

/// PEGF of `Z = aX + b` at `t`, expressed through the PEGF of `X`.
pub fn affine_pegf(spec: &DistributionSpec, a: f64, b: f64, s: SOrder, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(a.is_finite() && a > 0.0) {
        return Err(PegfError::InvalidParameter(format!("scale a must be positive, got {a}")));
    }
    if !(b.is_finite() && b >= 0.0) {
        return Err(PegfError::InvalidParameter(format!("shift b must be nonnegative, got {b}")));
    }
    let u = (t - b) / a;
    if spec.check_interior(u).is_err() {
        let (low, high) = spec.support();
        return Err(PegfError::OutOfSupport { x: t, low: a * low + b, high: a * high + b });
    }
    Ok(a.powf(1.0 - s.value()) * pegf(spec, s, u, cfg)?)
}

/// Tabulates the PEGF over a strictly increasing grid.
pub fn pegf_curve(spec: &DistributionSpec, s: SOrder, t_grid: &[f64], cfg: &QuadratureConfig) -> Result<EgfCurve> {
    if t_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(PegfError::InvalidParameter("t grid must be strictly increasing".into()));
    }
    let values = t_grid
        .iter()
        .enumerate()
        .map(|(i, &t)| pegf(spec, s, t, cfg).map_err(|e| e.at(i, t)))
        .collect::<Result<Vec<_>>>()?;
    EgfCurve::new(s, t_grid.to_vec(), values, spec.support().1, format!("quadrature {spec}"))
}
