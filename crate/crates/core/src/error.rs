use thiserror::Error;

use crate::report::Report;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds {bound:.3e}")]
    NotHermitian { residual: f64, bound: f64 },

    #[error("Gram form is degenerate: eigenvalue {eigenvalue:.3e} lies within {bound:.3e} of zero")]
    Degenerate { eigenvalue: f64, bound: f64 },

    #[error("matrix is singular")]
    Singular,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A construction finished but one of its certificates failed. The report
    /// carries the failing checks and their witnesses.
    #[error("{what}: certificate failed ({})", report.failures().join(", "))]
    Certificate { what: String, report: Box<Report> },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}
