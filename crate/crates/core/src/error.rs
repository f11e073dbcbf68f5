use thiserror::Error;

/// Errors produced by the efficiency, quadrature and rank-statistic routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("integral diverges: {0}")]
    Divergence(String),

    #[error("quadrature did not converge: estimate {value} with error {abs_err:e} after {subdivisions} panels")]
    NonConvergence {
        value: f64,
        abs_err: f64,
        subdivisions: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("density is outside the finite-variance class: {0}")]
    OutsideF2(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("score shapes do not satisfy any bound case: {0}")]
    Shape(String),

    #[error("extrapolation unstable: successive estimates {first} and {second} differ by more than {threshold:e}")]
    ExtrapolationUnstable {
        first: f64,
        second: f64,
        threshold: f64,
    },

    #[error("no bracket: {0}")]
    NoBracket(String),

    #[error("tied observations at indices {indices:?}")]
    Ties { indices: Vec<usize> },

    #[error("sample-size search exceeded budget of {0}")]
    BudgetExceeded(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn check_unit(u: f64) -> Result<()> {
    if u > 0.0 && u < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("probability {u} is not in (0, 1)")))
    }
}
