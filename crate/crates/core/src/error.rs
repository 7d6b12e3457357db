use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PegfError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point {x} is outside the support interior ({low}, {high}]")]
    OutOfSupport { x: f64, low: f64, high: f64 },

    #[error("integrand is not integrable at the lower endpoint (local exponent {exponent})")]
    NotIntegrable { exponent: f64 },

    #[error("quadrature did not reach tolerance: estimate {estimate}, error bound {error_bound}")]
    QuadratureFailure { estimate: f64, error_bound: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no positive root of lambda^s - s*B*lambda - B' (B={bs}, B'={bs_prime}, s={s})")]
    NoPositiveRoot { bs: f64, bs_prime: f64, s: f64 },

    #[error("root solver did not converge after {iterations} iterations (last {last})")]
    ConvergenceFailure { iterations: usize, last: f64 },

    #[error("grid too coarse: {points} points, need at least {required}")]
    GridTooCoarse { points: usize, required: usize },

    #[error("sample has zero spread")]
    DegenerateSample,

    #[error("value {value} outside the required range {range}")]
    OutOfRange { value: f64, range: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("at grid point {index} (t={t}): {source}")]
    AtGridPoint {
        index: usize,
        t: f64,
        #[source]
        source: Box<PegfError>,
    },
}

impl PegfError {
    pub(crate) fn at(self, index: usize, t: f64) -> Self {
        PegfError::AtGridPoint { index, t, source: Box::new(self) }
    }

    /// The error with any grid-point annotation removed.
    pub fn root_cause(&self) -> &PegfError {
        match self {
            PegfError::AtGridPoint { source, .. } => source.root_cause(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, PegfError>;
