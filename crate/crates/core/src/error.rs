use thiserror::Error;

/// Failures reported by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("z = {re} + {im}i lies within {delta:e} of +/-1; eigenvalue route is degenerate")]
    DegenerateEigenvalue { re: f64, im: f64, delta: f64 },

    #[error("no critical value found for k = {k} in beta*B range [{lo}, {hi}]")]
    MissingRoot { k: usize, lo: f64, hi: f64 },

    #[error("beta*B = {beta_b} is within {zone:e} of the critical value {critical}")]
    SingularInput {
        beta_b: f64,
        critical: f64,
        zone: f64,
    },

    #[error(
        "phase step {jump} rad near theta = {theta} still unresolved after {levels} refinements"
    )]
    UnresolvedWinding {
        theta: f64,
        jump: f64,
        levels: usize,
    },

    #[error("accumulated winding {raw} is not within 0.01 of an integer")]
    NonIntegerWinding { raw: f64 },

    #[error("negative winding number {0}; loop orientation convention violated")]
    NegativeWinding(i64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
