use thiserror::Error;

use crate::modelspec::ParseError;

pub type Result<T, E = MeqError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum MeqError {
    #[error("index error: {0}")]
    Index(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("degenerate steady state: {0}")]
    Degeneracy(String),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl MeqError {
    /// Short machine-readable tag, used by the command-line front-end.
    pub fn kind(&self) -> &'static str {
        match self {
            MeqError::Index(_) => "index",
            MeqError::Argument(_) => "argument",
            MeqError::Shape(_) => "shape",
            MeqError::LayoutMismatch(_) => "layout",
            MeqError::Validation(_) => "validation",
            MeqError::Capacity(_) => "capacity",
            MeqError::Degeneracy(_) => "degeneracy",
            MeqError::Convergence { .. } => "convergence",
            MeqError::Numerical(_) => "numerical",
            MeqError::Parse(e) => e.kind.as_str(),
        }
    }
}
