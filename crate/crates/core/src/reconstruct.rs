//! Recovering a distribution from a tabulated PEGF.
//!
//! Differentiating `B(t) F(t)^s = ∫ f^s` gives, pointwise in `t`,
//!
//! ```text
//! g(λ) = λ^s - s B λ - B' = 0
//! ```
//!
//! `g` falls on `(0, λ*)` and rises after, with `λ* = B^(1/(s-1))`, so there
//! are at most two positive roots: the larger one always exists when
//! `g(λ*) <= 0`, the smaller one only when `B' < 0`. Once `λ` is known on the
//! grid, `log F(t) = -∫_t^T λ(u) du` with `F(T) = 1`.

use std::fmt::Write as _;

use crate::curve::EgfCurve;
use crate::error::{PegfError, Result};

/// Which root to take when no previous value is available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitBranch {
    Larger,
    Smaller,
    /// Root closest to the given value.
    Hint(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSolveConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub init_branch: InitBranch,
    /// When `g(λ*)` is positive but no larger than
    /// `tangent_tol * max(1, |B'|)`, the data is treated as touching the
    /// double-root boundary: `B'` is moved onto it and `λ = λ*` is returned.
    pub tangent_tol: f64,
}

impl Default for RootSolveConfig {
    fn default() -> Self {
        Self { tol: 1e-13, max_iter: 200, init_branch: InitBranch::Larger, tangent_tol: 0.1 }
    }
}

impl RootSolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) || self.max_iter < 1 {
            return Err(PegfError::InvalidParameter(format!(
                "root solver needs tol > 0 and max_iter >= 1 (tol={}, max_iter={})",
                self.tol, self.max_iter
            )));
        }
        if !(self.tangent_tol.is_finite() && self.tangent_tol >= 0.0) {
            return Err(PegfError::InvalidParameter(format!("tangent_tol must be >= 0, got {}", self.tangent_tol)));
        }
        if let InitBranch::Hint(v) = self.init_branch {
            if !(v.is_finite() && v > 0.0) {
                return Err(PegfError::InvalidParameter(format!("branch hint must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// How a root was picked at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootChoice {
    /// Only one positive root existed.
    Single,
    Larger,
    Smaller,
    /// No root for the raw derivative; `B'` was raised by `adjustment`.
    Tangent {
        adjustment: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSolution {
    pub lambda: f64,
    pub choice: RootChoice,
    /// Derivative the accepted root satisfies (differs from the input only
    /// for `Tangent`).
    pub bs_prime_used: f64,
    /// `|g(λ)|` against `bs_prime_used`.
    pub residual: f64,
}

enum Roots {
    Two { smaller: f64, larger: f64 },
    Single(f64),
    Tangent { lambda: f64, adjustment: f64 },
}

fn g(lam: f64, bs: f64, bs_prime: f64, s: f64) -> f64 {
    lam.powf(s) - s * bs * lam - bs_prime
}

/// Newton's method kept inside a sign-change bracket, bisecting whenever a
/// step would leave it or fails to halve the bracket.
fn bracketed_root<G, D>(f: G, df: D, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> Result<f64>
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(PegfError::ConvergenceFailure { iterations: 0, last: 0.5 * (lo + hi) });
    }
    // Orient so that f(lo) < 0 < f(hi).
    if flo > 0.0 {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut x = 0.5 * (lo + hi);
    let mut dx_old = (hi - lo).abs();
    let mut dx = dx_old;
    let mut fx = f(x);
    let mut dfx = df(x);
    for _ in 0..max_iter {
        let newton_leaves = ((x - hi) * dfx - fx) * ((x - lo) * dfx - fx) > 0.0;
        if newton_leaves || (2.0 * fx).abs() > (dx_old * dfx).abs() {
            dx_old = dx;
            dx = 0.5 * (hi - lo);
            x = lo + dx;
        } else {
            dx_old = dx;
            dx = fx / dfx;
            x -= dx;
        }
        if dx.abs() <= tol * x.abs().max(1e-300) || fx == 0.0 {
            return Ok(x);
        }
        fx = f(x);
        dfx = df(x);
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
    }
    Err(PegfError::ConvergenceFailure { iterations: max_iter, last: x })
}

fn positive_roots(bs: f64, bs_prime: f64, s: f64, cfg: &RootSolveConfig) -> Result<Roots> {
    let lam_star = bs.powf(1.0 / (s - 1.0));
    let g_star = g(lam_star, bs, bs_prime, s);
    if g_star > 0.0 {
        return if g_star <= cfg.tangent_tol * bs_prime.abs().max(1.0) {
            Ok(Roots::Tangent { lambda: lam_star, adjustment: g_star })
        } else {
            Err(PegfError::NoPositiveRoot { bs, bs_prime, s })
        };
    }
    if s == 2.0 {
        let root = (bs * bs + bs_prime).max(0.0).sqrt();
        let larger = bs + root;
        return Ok(if bs_prime < 0.0 {
            // Product of the roots is -B'; avoids cancellation in bs - root.
            Roots::Two { smaller: -bs_prime / larger, larger }
        } else {
            Roots::Single(larger)
        });
    }
    let f = |l: f64| g(l, bs, bs_prime, s);
    let df = |l: f64| s * l.powf(s - 1.0) - s * bs;
    let mut hi = 2.0 * lam_star;
    let mut doublings = 0;
    while f(hi) <= 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 2000 || !hi.is_finite() {
            return Err(PegfError::ConvergenceFailure { iterations: doublings, last: hi });
        }
    }
    let larger = if g_star == 0.0 { lam_star } else { bracketed_root(f, df, lam_star, hi, cfg.tol, cfg.max_iter)? };
    if bs_prime < 0.0 {
        let smaller =
            if g_star == 0.0 { lam_star } else { bracketed_root(f, df, 0.0, lam_star, cfg.tol, cfg.max_iter)? };
        Ok(Roots::Two { smaller, larger })
    } else {
        Ok(Roots::Single(larger))
    }
}

fn finish(lambda: f64, choice: RootChoice, bs: f64, bs_prime: f64, s: f64) -> LambdaSolution {
    let bs_prime_used = match choice {
        RootChoice::Tangent { adjustment } => bs_prime + adjustment,
        _ => bs_prime,
    };
    LambdaSolution { lambda, choice, bs_prime_used, residual: g(lambda, bs, bs_prime_used, s).abs() }
}

fn nearest(smaller: f64, larger: f64, target: f64) -> RootChoice {
    if (smaller - target).abs() < (larger - target).abs() {
        RootChoice::Smaller
    } else {
        RootChoice::Larger
    }
}

fn check_inputs(bs: f64, bs_prime: f64, s: f64) -> Result<()> {
    if !(s.is_finite() && s > 1.0) {
        return Err(PegfError::InvalidParameter(format!("reconstruction needs s > 1, got {s}")));
    }
    if !(bs.is_finite() && bs > 0.0) || !bs_prime.is_finite() {
        return Err(PegfError::InvalidParameter(format!("need B > 0 and finite B', got B={bs}, B'={bs_prime}")));
    }
    Ok(())
}

/// Solves `λ^s - s·B·λ - B' = 0` for a positive `λ`.
///
/// With two positive roots the one closest to `prev_lambda` wins; without a
/// previous value `cfg.init_branch` decides.
pub fn solve_lambda(
    bs: f64,
    bs_prime: f64,
    s: f64,
    prev_lambda: Option<f64>,
    cfg: &RootSolveConfig,
) -> Result<LambdaSolution> {
    check_inputs(bs, bs_prime, s)?;
    cfg.validate()?;
    Ok(match positive_roots(bs, bs_prime, s, cfg)? {
        Roots::Tangent { lambda, adjustment } => finish(lambda, RootChoice::Tangent { adjustment }, bs, bs_prime, s),
        Roots::Single(l) => finish(l, RootChoice::Single, bs, bs_prime, s),
        Roots::Two { smaller, larger } => {
            let choice = match (prev_lambda, cfg.init_branch) {
                (Some(p), _) => nearest(smaller, larger, p),
                (None, InitBranch::Hint(v)) => nearest(smaller, larger, v),
                (None, InitBranch::Larger) => RootChoice::Larger,
                (None, InitBranch::Smaller) => RootChoice::Smaller,
            };
            let l = if choice == RootChoice::Smaller { smaller } else { larger };
            finish(l, choice, bs, bs_prime, s)
        }
    })
}

fn solve_on_branch(
    bs: f64,
    bs_prime: f64,
    s: f64,
    larger_branch: bool,
    cfg: &RootSolveConfig,
) -> Result<LambdaSolution> {
    Ok(match positive_roots(bs, bs_prime, s, cfg)? {
        Roots::Tangent { lambda, adjustment } => finish(lambda, RootChoice::Tangent { adjustment }, bs, bs_prime, s),
        Roots::Single(l) => finish(l, RootChoice::Single, bs, bs_prime, s),
        Roots::Two { larger, .. } if larger_branch => finish(larger, RootChoice::Larger, bs, bs_prime, s),
        Roots::Two { smaller, .. } => finish(smaller, RootChoice::Smaller, bs, bs_prime, s),
    })
}

/// Derivative of tabulated values: three-point stencils on a non-uniform
/// grid, one-sided second-order stencils at the ends.
pub fn finite_difference(t: &[f64], v: &[f64]) -> Vec<f64> {
    let n = t.len();
    assert!(n >= 3 && v.len() == n);
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        let h1 = t[i] - t[i - 1];
        let h2 = t[i + 1] - t[i];
        d[i] = -h2 / (h1 * (h1 + h2)) * v[i - 1] + (h2 - h1) / (h1 * h2) * v[i] + h1 / (h2 * (h1 + h2)) * v[i + 1];
    }
    let (h1, h2) = (t[1] - t[0], t[2] - t[1]);
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * v[0] + (h1 + h2) / (h1 * h2) * v[1] - h1 / (h2 * (h1 + h2)) * v[2];
    let (h1, h2) = (t[n - 2] - t[n - 3], t[n - 1] - t[n - 2]);
    d[n - 1] = h2 / (h1 * (h1 + h2)) * v[n - 3] - (h1 + h2) / (h1 * h2) * v[n - 2]
        + (h1 + 2.0 * h2) / (h2 * (h1 + h2)) * v[n - 1];
    d
}

/// Derivative of a PEGF curve of order `s > 1`.
///
/// Differences are taken on `u = B^(1/(1-s))`, which is exactly linear in `t`
/// for the uniform, power and generalized power families and smooth near a
/// lower endpoint where `B` blows up like `(t - low)^(1-s)`. Falls back to
/// differencing `B` directly when the transform over- or underflows.
pub fn pegf_slope(t: &[f64], b: &[f64], s: f64) -> Vec<f64> {
    let u: Vec<f64> = b.iter().map(|v| (v.ln() / (1.0 - s)).exp()).collect();
    if !u.iter().all(|x| x.is_finite() && *x > 0.0) {
        return finite_difference(t, b);
    }
    finite_difference(t, &u).iter().zip(u.iter().zip(b)).map(|(du, (uv, bv))| (1.0 - s) * bv / uv * du).collect()
}

/// Reversed hazard and distribution function recovered from a PEGF curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub t_grid: Vec<f64>,
    pub lambda: Vec<f64>,
    pub cdf: Vec<f64>,
    /// Derivative of the curve each λ satisfies.
    pub bs_prime: Vec<f64>,
    pub max_eq8_residual: f64,
    pub root_branch_log: Vec<RootChoice>,
    /// Where `F = 1` was anchored.
    pub anchor: f64,
    pub warnings: Vec<String>,
}

impl ReconstructionResult {
    /// Largest `B'` shift applied at tangent points.
    pub fn max_tangent_adjustment(&self) -> f64 {
        self.root_branch_log
            .iter()
            .map(|c| match c {
                RootChoice::Tangent { adjustment } => *adjustment,
                _ => 0.0,
            })
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,lambda,cdf\n");
        for ((t, l), f) in self.t_grid.iter().zip(&self.lambda).zip(&self.cdf) {
            let _ = writeln!(out, "{t:?},{l:?},{f:?}");
        }
        let _ = writeln!(out, "# max_eq8_residual={:?}", self.max_eq8_residual);
        out
    }
}

/// Reconstructs `λ` and `F` on the curve's grid.
///
/// The first grid point picks a root according to `cfg.init_branch`; later
/// points stay on the same branch (larger or smaller root), which is how
/// continuity is carried across points where the roots nearly coincide.
pub fn reconstruct_cdf(curve: &EgfCurve, cfg: &RootSolveConfig) -> Result<ReconstructionResult> {
    cfg.validate()?;
    let s = curve.s().value();
    if !(s > 1.0) {
        return Err(PegfError::InvalidParameter(format!("reconstruction needs s > 1, got {s}")));
    }
    let t = curve.t_grid();
    let b = curve.values();
    let n = t.len();
    if n < 3 {
        return Err(PegfError::GridTooCoarse { points: n, required: 3 });
    }
    let mut warnings = Vec::new();
    if b.windows(2).any(|w| w[1] < w[0]) {
        warnings.push("PEGF is not increasing in t; branch fixed by continuity tracking".to_string());
    }
    let slope = pegf_slope(t, b, s);

    let mut larger_branch = !matches!(cfg.init_branch, InitBranch::Smaller);
    let mut lambda = Vec::with_capacity(n);
    let mut bs_prime = Vec::with_capacity(n);
    let mut log = Vec::with_capacity(n);
    let mut max_residual = 0.0f64;
    for i in 0..n {
        let sol = if i == 0 {
            let first = solve_lambda(b[0], slope[0], s, None, cfg).map_err(|e| e.at(0, t[0]))?;
            if let InitBranch::Hint(_) = cfg.init_branch {
                larger_branch = first.lambda >= b[0].powf(1.0 / (s - 1.0));
            }
            first
        } else {
            solve_on_branch(b[i], slope[i], s, larger_branch, cfg).map_err(|e| e.at(i, t[i]))?
        };
        max_residual = max_residual.max(sol.residual);
        lambda.push(sol.lambda);
        bs_prime.push(sol.bs_prime_used);
        log.push(sol.choice);
    }

    let last = t[n - 1];
    let anchor = if curve.support_high().is_finite() { curve.support_high() } else { last };
    let mut tail = 0.0;
    if !curve.support_high().is_finite() {
        warnings.push(format!("unbounded support: F anchored to 1 at the last grid point t={last:?} (truncation)"));
    } else if anchor > last {
        // Linear extrapolation of λ over (last, anchor].
        let slope_l = (lambda[n - 1] - lambda[n - 2]) / (t[n - 1] - t[n - 2]);
        let lam_end = (lambda[n - 1] + slope_l * (anchor - last)).max(0.0);
        tail = 0.5 * (lambda[n - 1] + lam_end) * (anchor - last);
        warnings.push(format!("lambda extrapolated over ({last:?}, {anchor:?}] to anchor F=1"));
    }
    let mut log_f = vec![0.0; n];
    log_f[n - 1] = -tail;
    for i in (0..n - 1).rev() {
        log_f[i] = log_f[i + 1] - 0.5 * (lambda[i] + lambda[i + 1]) * (t[i + 1] - t[i]);
    }
    let cdf: Vec<f64> = log_f.iter().map(|v| v.exp()).collect();
    debug_assert!(cdf.windows(2).all(|w| w[0] <= w[1]));

    Ok(ReconstructionResult {
        t_grid: t.to_vec(),
        lambda,
        cdf,
        bs_prime,
        max_eq8_residual: max_residual,
        root_branch_log: log,
        anchor,
        warnings,
    })
}

/// Parameters of `F(x) = exp(a (x - b))` recovered from a constant curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantPegfFit {
    pub a: f64,
    pub b: f64,
}

/// Recognises a PEGF that does not depend on `t`.
///
/// A constant value `k` forces a constant reversed hazard `a = (s k)^(1/(s-1))`.
pub fn detect_constant_pegf(curve: &EgfCurve, rel_tol: f64) -> Option<ConstantPegfFit> {
    let s = curve.s().value();
    if !(s > 1.0) {
        return None;
    }
    let v = curve.values();
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let spread = v.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max) / mean;
    (spread <= rel_tol).then(|| ConstantPegfFit { a: (s * mean).powf(1.0 / (s - 1.0)), b: curve.support_high() })
}
