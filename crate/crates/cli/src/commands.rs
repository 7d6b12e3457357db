use std::fmt;
use std::io::Read;

use pegf_core::egf::{past_entropy, past_entropy_via_rhr, pegf, pegf_curve};
use pegf_core::inference::{power_gof_test, EstimatorConfig, GofConfig, PlugInEstimator, SampleData};
use pegf_core::reconstruct::{reconstruct_cdf, RootChoice};
use pegf_core::{EgfCurve, PegfError, QuadratureConfig, RootSolveConfig};
use serde_json::{json, Value};

use crate::{Command, Format};

/// Failure of a subcommand, carrying its exit status.
#[derive(Debug)]
pub enum CliError {
    /// A flag combination the parser could not reject on its own.
    Usage(String),
    /// Unreadable input.
    Io(String),
    Domain(PegfError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) | CliError::Domain(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Io(msg) => f.write_str(msg),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<PegfError> for CliError {
    fn from(e: PegfError) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(cond: bool, msg: impl FnOnce() -> String) -> CliResult<()> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Usage(msg()))
    }
}

fn read_input(path: &str) -> CliResult<(String, String)> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        return Ok((text, "stdin".into()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    Ok((text, path.to_string()))
}

fn read_sample(path: &str) -> CliResult<SampleData> {
    let (text, origin) = read_input(path)?;
    Ok(SampleData::from_text(&text, origin)?)
}

fn scalar(name: &str, value: f64, format: Format) -> String {
    match format {
        Format::Csv => format!("{name},{value:?}\n"),
        Format::Json => format!("{}\n", json!({ name: value })),
    }
}

fn high_json(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!("inf")
    }
}

fn branch_name(c: &RootChoice) -> &'static str {
    match c {
        RootChoice::Single => "single",
        RootChoice::Larger => "larger",
        RootChoice::Smaller => "smaller",
        RootChoice::Tangent { .. } => "tangent",
    }
}

/// Applies an optional relative tolerance to a quadrature configuration.
fn tuned(base: QuadratureConfig, rel_tol: Option<f64>) -> CliResult<QuadratureConfig> {
    match rel_tol {
        Some(tol) => Ok(base.with_rel_tol(tol)?),
        None => Ok(base),
    }
}

pub fn run(command: Command, format: Format, rel_tol: Option<f64>) -> CliResult<String> {
    let quad = &tuned(QuadratureConfig::default(), rel_tol)?;
    match command {
        Command::Eval { dist, s, t, force_quadrature } => {
            usage(t.is_finite(), || format!("--t must be finite, got {t}"))?;
            let value = if force_quadrature {
                pegf(&dist, s, t, quad)?
            } else {
                match dist.closed_form_pegf(s.value(), t) {
                    Err(PegfError::Unsupported(_)) => pegf(&dist, s, t, quad)?,
                    other => other?,
                }
            };
            Ok(scalar("pegf", value, format))
        }
        Command::Curve { dist, s, t_min, t_max, points, support_high } => {
            usage(t_min.is_finite() && t_max.is_finite() && t_min < t_max, || {
                format!("need finite --t-min < --t-max, got {t_min} and {t_max}")
            })?;
            let n = points as usize;
            let grid: Vec<f64> = (0..n)
                .map(|i| if i + 1 == n { t_max } else { t_min + (t_max - t_min) * i as f64 / (n - 1) as f64 })
                .collect();
            let mut curve = pegf_curve(&dist, s, &grid, quad)?;
            if let Some(high) = support_high {
                curve = curve.with_support_high(high)?;
            }
            Ok(match format {
                Format::Csv => curve.to_csv(),
                Format::Json => format!(
                    "{}\n",
                    json!({
                        "s": curve.s().value(),
                        "support_high": high_json(curve.support_high()),
                        "source": curve.source(),
                        "t": curve.t_grid(),
                        "value": curve.values(),
                    })
                ),
            })
        }
        Command::Entropy { dist, t, via_rhr } => {
            usage(t.is_finite(), || format!("--t must be finite, got {t}"))?;
            let v = if via_rhr { past_entropy_via_rhr(&dist, t, quad)? } else { past_entropy(&dist, t, quad)? };
            Ok(scalar("past_entropy", v, format))
        }
        Command::Reconstruct { input, branch } => {
            let (text, _) = read_input(&input)?;
            let curve = EgfCurve::from_csv(&text)?;
            let cfg = RootSolveConfig { init_branch: branch, ..RootSolveConfig::default() };
            let rec = reconstruct_cdf(&curve, &cfg)?;
            for w in &rec.warnings {
                eprintln!("warning: {w}");
            }
            Ok(match format {
                Format::Csv => rec.to_csv(),
                Format::Json => {
                    let branches: Vec<&str> = rec.root_branch_log.iter().map(branch_name).collect();
                    format!(
                        "{}\n",
                        json!({
                            "t": rec.t_grid,
                            "lambda": rec.lambda,
                            "cdf": rec.cdf,
                            "max_eq8_residual": rec.max_eq8_residual,
                            "root_branch": branches,
                            "anchor": rec.anchor,
                            "warnings": rec.warnings,
                        })
                    )
                }
            })
        }
        Command::Estimate { input, s, t, method, bandwidth, boundary } => {
            usage(t.is_finite(), || format!("--t must be finite, got {t}"))?;
            let sample = read_sample(&input)?;
            let cfg = EstimatorConfig {
                method: method.into(),
                bandwidth,
                boundary: boundary.into(),
                quadrature: tuned(EstimatorConfig::default().quadrature, rel_tol)?,
            };
            let v = PlugInEstimator::new(&sample, &cfg)?.pegf(s.value(), t)?;
            Ok(scalar("pegf_estimate", v, format))
        }
        Command::Gof { input, s, q_lo, q_hi, grid, boot, seed, rescale_max, summary } => {
            usage(q_lo > 0.0 && q_lo < q_hi && q_hi < 1.0, || {
                format!("need 0 < --q-lo < --q-hi < 1, got {q_lo} and {q_hi}")
            })?;
            let mut sample = read_sample(&input)?;
            if rescale_max {
                sample = sample.rescaled_to_max()?;
            }
            let cfg = GofConfig {
                s,
                q_lo,
                q_hi,
                grid: grid as usize,
                n_boot: boot as usize,
                seed,
                estimator: EstimatorConfig::default(),
            };
            let report = power_gof_test(&sample, &cfg)?;
            Ok(match format {
                Format::Csv => {
                    let mut out = report.to_csv();
                    if summary {
                        for line in report.summary().lines() {
                            out.push_str("# ");
                            out.push_str(line.trim_start());
                            out.push('\n');
                        }
                    }
                    out
                }
                Format::Json => format!(
                    "{}\n",
                    json!({
                        "statistic": report.statistic,
                        "p_value": report.p_value,
                        "c_hat": report.c_hat,
                        "s": report.s,
                        "n": report.n,
                        "n_boot": report.n_boot,
                        "seed": report.seed,
                        "q_lo": report.t_grid_quantiles.0,
                        "q_hi": report.t_grid_quantiles.1,
                    })
                ),
            })
        }
        Command::Sample { dist, n, seed } => {
            let sample = dist.sample(n as usize, seed)?;
            Ok(match format {
                Format::Csv => sample.to_text(),
                Format::Json => format!("{}\n", json!({ "values": sample.values() })),
            })
        }
    }
}
