use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the requested map.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("cannot normalize: amplitude samples have zero norm")]
    ZeroNorm,

    #[error("non-finite amplitude sample at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("inconsistent joint distribution: p > 0 at ({row}, {col}) where a marginal vanishes")]
    InconsistentJoint { row: usize, col: usize },

    #[error("SVD of {rows}x{cols} matrix did not converge within {max_iterations} iterations (eps = {eps:e})")]
    SvdNonConvergence { rows: usize, cols: usize, max_iterations: usize, eps: f64 },

    #[error("rank {requested} out of range 1..={available}")]
    RankOutOfRange { requested: usize, available: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of a numerical routine on valid input, as opposed
    /// to rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::SvdNonConvergence { .. })
    }
}
