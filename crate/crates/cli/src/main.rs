//! `pegf`: evaluate, tabulate, invert and test past entropy generating functions.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pegf_core::inference::{Bandwidth, Boundary, EstimatorMethod};
use pegf_core::{DistributionSpec, InitBranch, QuadratureConfig, SOrder};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "pegf", version, about = "Past entropy generating functions of lifetime distributions")]
struct Cli {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// PEGF at one point (closed form when the family has one).
    Eval {
        #[arg(long, value_parser = parse_dist)]
        dist: DistributionSpec,
        #[arg(long, value_parser = parse_order)]
        s: SOrder,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Integrate numerically even when a closed form exists.
        #[arg(long)]
        force_quadrature: bool,
    },
    /// Tabulate the PEGF on an evenly spaced grid as curve CSV.
    Curve {
        #[arg(long, value_parser = parse_dist)]
        dist: DistributionSpec,
        #[arg(long, value_parser = parse_order)]
        s: SOrder,
        #[arg(long, allow_hyphen_values = true)]
        t_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        t_max: f64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        points: u32,
        /// Point where F = 1 (number or `inf`); defaults to the support's upper end.
        #[arg(long, value_parser = parse_high, allow_hyphen_values = true)]
        support_high: Option<f64>,
    },
    /// Past entropy at `t`.
    Entropy {
        #[arg(long, value_parser = parse_dist)]
        dist: DistributionSpec,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Compute through the reversed hazard rate instead of the density.
        #[arg(long)]
        via_rhr: bool,
    },
    /// Recover the reversed hazard and CDF from curve CSV (`-` reads stdin).
    Reconstruct {
        #[arg(long)]
        input: String,
        /// Root used at the first grid point: larger, smaller or hint=VALUE.
        #[arg(long, value_parser = parse_branch, default_value = "larger")]
        branch: InitBranch,
    },
    /// Plug-in PEGF estimate from a sample file (`-` reads stdin).
    Estimate {
        #[arg(long)]
        input: String,
        #[arg(long, value_parser = parse_order)]
        s: SOrder,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, value_enum, default_value_t = Method::Moment)]
        method: Method,
        /// `silverman` or a fixed positive bandwidth.
        #[arg(long, value_parser = parse_bandwidth, default_value = "silverman")]
        bandwidth: Bandwidth,
        #[arg(long, value_enum, default_value_t = BoundaryArg::Reflect)]
        boundary: BoundaryArg,
    },
    /// Bootstrap goodness-of-fit test for the power distribution.
    Gof {
        #[arg(long)]
        input: String,
        #[arg(long, value_parser = parse_gof_order, default_value = "2")]
        s: f64,
        #[arg(long, default_value_t = 0.2)]
        q_lo: f64,
        #[arg(long, default_value_t = 0.9)]
        q_hi: f64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(5..), default_value_t = 15)]
        grid: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(99..), default_value_t = 499)]
        boot: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Divide the sample by its maximum first (changes the null family).
        #[arg(long)]
        rescale_max: bool,
        /// Append a human-readable summary as `#` comment lines.
        #[arg(long)]
        summary: bool,
    },
    /// Seeded draws, one value per line.
    Sample {
        #[arg(long, value_parser = parse_dist)]
        dist: DistributionSpec,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Moment,
    Quadrature,
}

impl From<Method> for EstimatorMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Moment => EstimatorMethod::Moment,
            Method::Quadrature => EstimatorMethod::Quadrature,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BoundaryArg {
    Reflect,
    None,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Reflect => Boundary::Reflect,
            BoundaryArg::None => Boundary::None,
        }
    }
}

fn parse_dist(text: &str) -> Result<DistributionSpec, String> {
    text.parse().map_err(|e: pegf_core::PegfError| e.to_string())
}

fn parse_order(text: &str) -> Result<SOrder, String> {
    let s: f64 = text.parse().map_err(|_| format!("`{text}` is not a number"))?;
    SOrder::new(s).map_err(|e| e.to_string())
}

fn parse_gof_order(text: &str) -> Result<f64, String> {
    let s: f64 = text.parse().map_err(|_| format!("`{text}` is not a number"))?;
    if s.is_finite() && s > 1.0 {
        Ok(s)
    } else {
        Err(format!("the test needs s > 1, got {s}"))
    }
}

fn parse_high(text: &str) -> Result<f64, String> {
    match text.trim().to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        other => other.parse().map_err(|_| format!("`{text}` is neither a number nor `inf`")),
    }
}

fn parse_branch(text: &str) -> Result<InitBranch, String> {
    match text.trim().to_ascii_lowercase().as_str() {
        "larger" => Ok(InitBranch::Larger),
        "smaller" => Ok(InitBranch::Smaller),
        other => match other.strip_prefix("hint=").map(str::parse::<f64>) {
            Some(Ok(v)) if v.is_finite() && v > 0.0 => Ok(InitBranch::Hint(v)),
            _ => Err(format!("expected larger, smaller or hint=POSITIVE, got `{text}`")),
        },
    }
}

fn parse_bandwidth(text: &str) -> Result<Bandwidth, String> {
    if text.eq_ignore_ascii_case("silverman") {
        return Ok(Bandwidth::Silverman);
    }
    match text.parse::<f64>() {
        Ok(h) if h.is_finite() && h > 0.0 => Ok(Bandwidth::Fixed(h)),
        _ => Err(format!("expected `silverman` or a positive number, got `{text}`")),
    }
}

/// Relative quadrature tolerance from `PEGF_QUAD_TOL`, if set.
fn tolerance_override() -> Result<Option<f64>, String> {
    match std::env::var("PEGF_QUAD_TOL") {
        Ok(raw) => {
            let tol: f64 = raw.trim().parse().map_err(|_| format!("PEGF_QUAD_TOL: `{raw}` is not a number"))?;
            QuadratureConfig::default().with_rel_tol(tol).map_err(|e| format!("PEGF_QUAD_TOL: {e}"))?;
            Ok(Some(tol))
        }
        Err(_) => Ok(None),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let tol = match tolerance_override() {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match commands::run(cli.command, cli.format, tol) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
