use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("expected {expected} entries, got {actual}")]
    WrongLength { expected: usize, actual: usize },

    #[error("matrix is not symmetric: entry ({row}, {col}) = {upper} but ({col}, {row}) = {lower}")]
    NotSymmetric {
        row: usize,
        col: usize,
        upper: f64,
        lower: f64,
    },

    #[error("non-finite value {value} in {context}")]
    NonFinite { context: String, value: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("index k = {k} out of range {lo}..={hi}")]
    IndexOutOfRange { k: usize, lo: usize, hi: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("operator has no active coefficients")]
    EmptyIndexSet,

    #[error("degenerate sign split: {0}")]
    DegenerateSplit(String),

    #[error("bracketing overflow while solving for sigma0 (last sigma {sigma:e})")]
    BracketOverflow { sigma: f64 },

    #[error("root solve did not reach tolerance after {iterations} iterations (residual {residual:e})")]
    RootNotConverged { iterations: usize, residual: f64 },

    #[error("equation forces S_{k} = 0 in box [0, {lambda_max}]^n")]
    ForcesZero { k: usize, lambda_max: f64 },

    #[error("invalid box: {0}")]
    InvalidBox(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
