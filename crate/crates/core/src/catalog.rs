//! Parametric lifetime distributions.
//!
//! Every family exposes its density, distribution function, reversed hazard
//! rate `f(t)/F(t)`, mean inactivity time `E(t - X | X <= t)` and, where one
//! exists, the exact past entropy generating function
//!
//! ```text
//! B_s(F; t) = ∫_low^t (f(x) / F(t))^s dx
//! ```
//!
//! | family      | B_s(F; t)                                         |
//! |-------------|---------------------------------------------------|
//! | uniform     | (t - a)^(1-s)                                     |
//! | power       | c^s t^(1-s) / (s(c-1) + 1)                        |
//! | exponential | μ^(1-s) (1 - e^(-st/μ)) / (s (1 - e^(-t/μ))^s)    |
//! | genpower    | (1-c)^s (ct+d)^(1-s) / (s(1-2c) + c)              |
//! | leftexp     | a^(s-1) / s                                       |
//!
//! Specs are validated on construction, so every `DistributionSpec` in
//! circulation carries a legal parameter set.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{PegfError, Result};
use crate::inference::SampleData;
use crate::quadrature::{integrate, QuadratureConfig};

/// Number of cached knots used by custom densities.
const CUSTOM_KNOTS: usize = 64;

/// Parametric family and its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// Uniform on `[a, b]`.
    Uniform { a: f64, b: f64 },
    /// `F(x) = x^c` on `(0, 1)`.
    Power { c: f64 },
    /// Exponential with mean `mu`.
    Exponential { mu: f64 },
    /// `F(x) = ((cx + d) / (cb + d))^((1-c)/c)` on `(-d/c, b)`.
    GeneralizedPower { c: f64, d: f64, b: f64 },
    /// `F(x) = exp(a (x - b))` on `(-inf, b]`.
    LeftExponential { a: f64, b: f64 },
    /// User-supplied density on `(low, high)`.
    Custom(CustomDensity),
}

/// A user-supplied density with a cached cumulative grid.
#[derive(Clone)]
pub struct CustomDensity {
    name: String,
    density: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    low: f64,
    high: f64,
    norm: f64,
    knots: Vec<f64>,
    cumulative: Vec<f64>,
    cfg: QuadratureConfig,
}

impl fmt::Debug for CustomDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomDensity")
            .field("name", &self.name)
            .field("low", &self.low)
            .field("high", &self.high)
            .field("norm", &self.norm)
            .finish()
    }
}

impl PartialEq for CustomDensity {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.density, &other.density) && self.low == other.low && self.high == other.high
    }
}

fn knot_position(low: f64, high: f64, u: f64) -> f64 {
    match (low.is_finite(), high.is_finite()) {
        (true, true) => low + u * (high - low),
        (false, true) => high - (1.0 - u) / u,
        (true, false) => low + u / (1.0 - u),
        (false, false) => (u - 0.5) / (u * (1.0 - u)),
    }
}

impl CustomDensity {
    fn new(
        name: &str,
        density: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        low: f64,
        high: f64,
        cfg: QuadratureConfig,
    ) -> Result<Self> {
        if low.is_nan() || high.is_nan() || low >= high || low == f64::INFINITY || high == f64::NEG_INFINITY {
            return Err(PegfError::InvalidParameter(format!(
                "custom support must satisfy low < high, got ({low}, {high})"
            )));
        }
        let mut knots = Vec::with_capacity(CUSTOM_KNOTS + 1);
        knots.push(low);
        for k in 1..CUSTOM_KNOTS {
            knots.push(knot_position(low, high, k as f64 / CUSTOM_KNOTS as f64));
        }
        knots.push(high);
        let mut cumulative = Vec::with_capacity(knots.len());
        cumulative.push(0.0);
        let mut acc = 0.0;
        for w in knots.windows(2) {
            let piece = integrate(|x| density(x), w[0], w[1], &cfg)?;
            if !(piece.value >= -1e-14) {
                return Err(PegfError::InvalidParameter("custom density is negative".into()));
            }
            acc += piece.value.max(0.0);
            cumulative.push(acc);
        }
        if (acc - 1.0).abs() > 1e-6 {
            return Err(PegfError::InvalidParameter(format!("custom density integrates to {acc}, expected 1")));
        }
        Ok(Self { name: name.to_string(), density, low, high, norm: acc, knots, cumulative, cfg })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    fn pdf(&self, x: f64) -> f64 {
        if x > self.low && x <= self.high {
            let v = (self.density)(x) / self.norm;
            if v.is_finite() {
                v.max(0.0)
            } else {
                0.0
            }
        } else {
            0.0
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        if x <= self.low {
            return 0.0;
        }
        if x >= self.high {
            return 1.0;
        }
        let k = self.knots.partition_point(|&knot| knot <= x).saturating_sub(1);
        let base = self.cumulative[k];
        let tail = integrate(|u| (self.density)(u), self.knots[k], x, &self.cfg).map(|r| r.value).unwrap_or(0.0);
        ((base + tail) / self.norm).clamp(0.0, 1.0)
    }

    fn quantile(&self, q: f64) -> f64 {
        let target = q * self.norm;
        let k = self.cumulative.partition_point(|&c| c < target).clamp(1, self.knots.len() - 1);
        let mut lo = self.knots[k - 1];
        let mut hi = self.knots[k];
        if !lo.is_finite() {
            lo = hi - 1.0;
            while self.cdf(lo) > q {
                lo = hi - 2.0 * (hi - lo);
            }
        }
        if !hi.is_finite() {
            hi = lo + 1.0;
            while self.cdf(hi) < q {
                hi = lo + 2.0 * (hi - lo);
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) < q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Local exponent of the density at the lower endpoint, `f(x) ~ (x - low)^alpha`.
    fn lower_exponent(&self) -> f64 {
        if !self.low.is_finite() {
            return 0.0;
        }
        let width = if self.high.is_finite() { self.high - self.low } else { 1.0 };
        let (d1, d2) = (1e-9 * width, 1e-6 * width);
        let f1 = (self.density)(self.low + d1);
        let f2 = (self.density)(self.low + d2);
        if !(f1 > 0.0 && f2 > 0.0 && f1.is_finite() && f2.is_finite()) {
            return 0.0;
        }
        let alpha = (f2 / f1).ln() / (d2 / d1).ln();
        // Only a clearly negative slope is treated as a singularity.
        if alpha < -1e-3 {
            alpha
        } else {
            0.0
        }
    }
}

/// A validated lifetime distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionSpec(Family);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(PegfError::InvalidParameter(msg()))
    }
}

fn finite(vals: &[f64]) -> bool {
    vals.iter().all(|v| v.is_finite())
}

impl DistributionSpec {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        check(finite(&[a, b]) && a < b, || format!("uniform requires a < b, got a={a}, b={b}"))?;
        Ok(Self(Family::Uniform { a, b }))
    }

    pub fn power(c: f64) -> Result<Self> {
        check(c.is_finite() && c > 0.0, || format!("power requires c > 0, got {c}"))?;
        Ok(Self(Family::Power { c }))
    }

    pub fn exponential(mu: f64) -> Result<Self> {
        check(mu.is_finite() && mu > 0.0, || format!("exponential requires mu > 0, got {mu}"))?;
        Ok(Self(Family::Exponential { mu }))
    }

    pub fn generalized_power(c: f64, d: f64, b: f64) -> Result<Self> {
        check(finite(&[c, d, b]) && c > 0.0 && c < 1.0, || format!("genpower requires 0 < c < 1, got {c}"))?;
        check(c * b + d > 0.0, || format!("genpower requires cb + d > 0, got {}", c * b + d))?;
        Ok(Self(Family::GeneralizedPower { c, d, b }))
    }

    pub fn left_exponential(a: f64, b: f64) -> Result<Self> {
        check(finite(&[a, b]) && a > 0.0, || format!("leftexp requires a > 0, got {a}"))?;
        Ok(Self(Family::LeftExponential { a, b }))
    }

    /// Wraps an arbitrary density on `(low, high)`; `low` may be `-inf` and
    /// `high` may be `+inf`. The density must integrate to one within 1e-6.
    pub fn custom<F>(name: &str, density: F, low: f64, high: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let inner = CustomDensity::new(name, Arc::new(density), low, high, QuadratureConfig::default())?;
        Ok(Self(Family::Custom(inner)))
    }

    pub fn family(&self) -> &Family {
        &self.0
    }

    /// Support endpoints `(low, high)`.
    pub fn support(&self) -> (f64, f64) {
        match &self.0 {
            Family::Uniform { a, b } => (*a, *b),
            Family::Power { .. } => (0.0, 1.0),
            Family::Exponential { .. } => (0.0, f64::INFINITY),
            Family::GeneralizedPower { c, d, b } => (-d / c, *b),
            Family::LeftExponential { b, .. } => (f64::NEG_INFINITY, *b),
            Family::Custom(cd) => (cd.low, cd.high),
        }
    }

    /// Fails with `OutOfSupport` unless `low < t <= high`.
    pub fn check_interior(&self, t: f64) -> Result<()> {
        let (low, high) = self.support();
        if t.is_finite() && t > low && t <= high {
            Ok(())
        } else {
            Err(PegfError::OutOfSupport { x: t, low, high })
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let (low, high) = self.support();
        if !(x > low && x <= high) {
            return 0.0;
        }
        match &self.0 {
            Family::Uniform { a, b } => 1.0 / (b - a),
            Family::Power { c } => c * x.powf(c - 1.0),
            Family::Exponential { mu } => (-x / mu).exp() / mu,
            Family::GeneralizedPower { c, d, b } => {
                let p = (1.0 - c) / c;
                let top = c * b + d;
                (1.0 - c) / top * ((c * x + d) / top).powf(p - 1.0)
            }
            Family::LeftExponential { a, b } => a * (a * (x - b)).exp(),
            Family::Custom(cd) => cd.pdf(x),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        let (low, high) = self.support();
        if x <= low {
            return 0.0;
        }
        if x >= high {
            return 1.0;
        }
        match &self.0 {
            Family::Uniform { a, b } => (x - a) / (b - a),
            Family::Power { c } => x.powf(*c),
            Family::Exponential { mu } => -(-x / mu).exp_m1(),
            Family::GeneralizedPower { c, d, b } => ((c * x + d) / (c * b + d)).powf((1.0 - c) / c),
            Family::LeftExponential { a, b } => (a * (x - b)).exp(),
            Family::Custom(cd) => cd.cdf(x),
        }
    }

    /// Inverse distribution function for `q` in `(0, 1)`.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(PegfError::OutOfRange { value: q, range: "(0, 1)".into() });
        }
        Ok(match &self.0 {
            Family::Uniform { a, b } => a + q * (b - a),
            Family::Power { c } => q.powf(1.0 / c),
            Family::Exponential { mu } => -mu * (-q).ln_1p(),
            Family::GeneralizedPower { c, d, b } => {
                let p = (1.0 - c) / c;
                ((c * b + d) * q.powf(1.0 / p) - d) / c
            }
            Family::LeftExponential { a, b } => b + q.ln() / a,
            Family::Custom(cd) => cd.quantile(q),
        })
    }

    pub fn reversed_hazard(&self, t: f64) -> Result<f64> {
        self.check_interior(t)?;
        Ok(match &self.0 {
            Family::Uniform { a, .. } => 1.0 / (t - a),
            Family::Power { c } => c / t,
            Family::Exponential { mu } => 1.0 / (mu * (t / mu).exp_m1()),
            Family::GeneralizedPower { c, d, .. } => (1.0 - c) / (c * t + d),
            Family::LeftExponential { a, .. } => *a,
            Family::Custom(cd) => cd.pdf(t) / cd.cdf(t),
        })
    }

    /// Density at `x = low + h`, using the exact offset `h` where the
    /// family's formula loses precision near a nonzero lower endpoint.
    pub(crate) fn pdf_near_low(&self, x: f64, h: f64) -> f64 {
        match &self.0 {
            Family::GeneralizedPower { c, b, d } if h > 0.0 && h.is_finite() && x <= *b => {
                let p = (1.0 - c) / c;
                let top = c * b + d;
                (1.0 - c) / top * (c * h / top).powf(p - 1.0)
            }
            _ => self.pdf(x),
        }
    }

    /// Reversed hazard at `x = low + h`; see [`Self::pdf_near_low`].
    pub(crate) fn reversed_hazard_near_low(&self, x: f64, h: f64) -> Result<f64> {
        match &self.0 {
            Family::GeneralizedPower { c, b, .. } if h > 0.0 && h.is_finite() && x <= *b => Ok((1.0 - c) / (c * h)),
            _ => self.reversed_hazard(x),
        }
    }

    /// `E(t - X | X <= t)`; closed form for the parametric families,
    /// quadrature of `∫ F / F(t)` for custom densities.
    pub fn mean_inactivity(&self, t: f64) -> Result<f64> {
        self.check_interior(t)?;
        match &self.0 {
            Family::Uniform { a, .. } => Ok(0.5 * (t - a)),
            Family::Power { c } => Ok(t / (c + 1.0)),
            Family::Exponential { mu } => Ok(t / -(-t / mu).exp_m1() - mu),
            Family::GeneralizedPower { c, d, .. } => Ok(c * t + d),
            Family::LeftExponential { a, .. } => Ok(1.0 / a),
            Family::Custom(cd) => {
                let ft = cd.cdf(t);
                let area = integrate(|x| cd.cdf(x), cd.low, t, &cd.cfg)?;
                Ok(area.value / ft)
            }
        }
    }

    /// Exponent `alpha` with `f(x) ~ (x - low)^alpha` as `x -> low`.
    /// Zero for densities that stay bounded there.
    pub fn lower_density_exponent(&self) -> f64 {
        match &self.0 {
            Family::Power { c } => c - 1.0,
            Family::GeneralizedPower { c, .. } => (1.0 - 2.0 * c) / c,
            Family::Custom(cd) => cd.lower_exponent(),
            _ => 0.0,
        }
    }

    /// Exact past entropy generating function.
    pub fn closed_form_pegf(&self, s: f64, t: f64) -> Result<f64> {
        if !(s.is_finite() && s >= 1.0) {
            return Err(PegfError::InvalidParameter(format!("order s must be >= 1, got {s}")));
        }
        self.check_interior(t)?;
        let exponent = s * self.lower_density_exponent();
        if exponent <= -1.0 {
            return Err(PegfError::NotIntegrable { exponent });
        }
        match &self.0 {
            Family::Uniform { a, .. } => Ok((t - a).powf(1.0 - s)),
            Family::Power { c } => Ok(c.powf(s) * t.powf(1.0 - s) / (s * (c - 1.0) + 1.0)),
            Family::Exponential { mu } => {
                let num = -(-s * t / mu).exp_m1();
                let den = s * (-(-t / mu).exp_m1()).powf(s);
                Ok(mu.powf(1.0 - s) * num / den)
            }
            Family::GeneralizedPower { c, d, .. } => {
                Ok((1.0 - c).powf(s) * (c * t + d).powf(1.0 - s) / (s * (1.0 - 2.0 * c) + c))
            }
            Family::LeftExponential { a, .. } => Ok(a.powf(s - 1.0) / s),
            Family::Custom(_) => Err(PegfError::Unsupported("no closed form for custom densities".into())),
        }
    }

    /// `n` sorted draws by inverse-CDF sampling of a seeded ChaCha8 stream.
    pub fn sample(&self, n: usize, seed: u64) -> Result<SampleData> {
        if let Family::Custom(_) = self.0 {
            return Err(PegfError::Unsupported("sampling requires a closed-form quantile".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..n).map(|_| self.quantile(open_unit(&mut rng))).collect::<Result<Vec<_>>>()?;
        SampleData::new(values, format!("sample {self} n={n} seed={seed}"))
    }
}

/// Uniform draw from the open interval `(0, 1)`.
pub(crate) fn open_unit<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Family::Uniform { a, b } => write!(f, "uniform(a={a},b={b})"),
            Family::Power { c } => write!(f, "power(c={c})"),
            Family::Exponential { mu } => write!(f, "exponential(mu={mu})"),
            Family::GeneralizedPower { c, d, b } => write!(f, "genpower(c={c},d={d},b={b})"),
            Family::LeftExponential { a, b } => write!(f, "leftexp(a={a},b={b})"),
            Family::Custom(cd) => write!(f, "custom(name={},low={},high={})", cd.name, cd.low, cd.high),
        }
    }
}

impl FromStr for DistributionSpec {
    type Err = PegfError;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = |why: &str| PegfError::Parse(format!("{why} in distribution `{text}`"));
        let open = text.find('(').ok_or_else(|| bad("missing `(`"))?;
        if !text.ends_with(')') {
            return Err(bad("missing `)`"));
        }
        let family = text[..open].trim().to_ascii_lowercase();
        let body = &text[open + 1..text.len() - 1];
        let mut params: Vec<(String, f64)> = Vec::new();
        for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let key = key.trim().to_ascii_lowercase();
            let value: f64 = value.trim().parse().map_err(|_| bad(&format!("bad number for `{key}`")))?;
            if params.iter().any(|(k, _)| *k == key) {
                return Err(bad(&format!("duplicate parameter `{key}`")));
            }
            params.push((key, value));
        }
        let take = |names: &[&str]| -> Result<Vec<f64>> {
            if params.len() != names.len() {
                return Err(bad(&format!("expected parameters {names:?}")));
            }
            names
                .iter()
                .map(|n| {
                    params
                        .iter()
                        .find(|(k, _)| k == n)
                        .map(|(_, v)| *v)
                        .ok_or_else(|| bad(&format!("missing parameter `{n}`")))
                })
                .collect()
        };
        match family.as_str() {
            "uniform" => {
                let p = take(&["a", "b"])?;
                Self::uniform(p[0], p[1])
            }
            "power" => Self::power(take(&["c"])?[0]),
            "exponential" | "exp" => Self::exponential(take(&["mu"])?[0]),
            "genpower" => {
                let p = take(&["c", "d", "b"])?;
                Self::generalized_power(p[0], p[1], p[2])
            }
            "leftexp" => {
                let p = take(&["a", "b"])?;
                Self::left_exponential(p[0], p[1])
            }
            "custom" => Err(PegfError::Unsupported("custom densities cannot be parsed from text".into())),
            other => Err(bad(&format!("unknown family `{other}`"))),
        }
    }
}
