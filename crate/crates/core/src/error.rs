use thiserror::Error;

use crate::baselines::sarima::SarimaModel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input text that could not be parsed; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Gaps, duplicates, incomplete years and similar shape problems.
    #[error("structural error: {0}")]
    Structure(String),

    /// A value outside the domain of the operation (zero rates, zero variance, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("Feller condition violated: xi^2 = {xi_sq:.6} > 2*kappa*theta = {bound:.6}")]
    FellerViolation { xi_sq: f64, bound: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The optimiser hit its iteration cap; the best iterate is attached.
    #[error("optimizer did not converge after {iterations} iterations")]
    NonConvergence {
        iterations: usize,
        best: Box<SarimaModel>,
    },

    #[error("constraint violated at optimum: {0}")]
    Constraint(String),

    #[error("every grid cell failed to fit ({} cells)", .0.len())]
    AllCellsFailed(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
