use thiserror::Error;

/// Errors raised by the counting, transform and search routines.
#[derive(Debug, Error)]
pub enum Error {
    /// The remainder pipeline (fractional-part sum, `S(u,U)`, `theta`) needs an even `ell`.
    #[error("ell = {ell} is odd; this computation is only defined for even ell")]
    OddEllUnsupported { ell: u32 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid manifold parameters: {0}")]
    InvalidManifold(String),

    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e} after {intervals} intervals)")]
    QuadratureFailure {
        tolerance: f64,
        estimate: f64,
        intervals: usize,
    },

    #[error("stationary point for k = {k} lies at {point}, outside ]{lower}, {upper}]")]
    StationaryPointOutOfRange {
        k: i64,
        point: f64,
        lower: f64,
        upper: f64,
    },

    #[error("no qualifying U among {searched} candidates (best U = {best_u}, max distance {best_distance})")]
    BudgetExhausted {
        searched: u64,
        best_u: u64,
        best_distance: f64,
    },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("no signal: integrated remainder vanishes identically")]
    NoSignal,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_even(ell: u32) -> Result<()> {
    if ell.is_multiple_of(2) && ell > 0 {
        Ok(())
    } else {
        Err(Error::OddEllUnsupported { ell })
    }
}
