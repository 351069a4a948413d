//! Experiment harness behind the `hier-jacobi` binary.
//!
//! Three commands drive the solver crate: `solve` runs one configuration
//! and prints a convergence summary, `sweep` runs a (k, overlap) grid and
//! writes one CSV row per combination, and `resources` tabulates the
//! work-per-cycle model without solving anything.

mod commands;
mod records;
mod spec;

pub use commands::{cmd_resources, cmd_solve, cmd_sweep};
pub use records::{ResourceRecord, SweepRecord};
pub use spec::{ExperimentSpec, Mode};

use thiserror::Error;

/// Process-level failures, each mapping to a distinct exit code.
#[derive(Debug, Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl AppError {
    /// 1 for usage errors, 2 for solver failures, 3 for I/O errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Numerical(_) => 2,
            AppError::Io(_) => 3,
        }
    }
}

impl From<hier_jacobi::SolverError> for AppError {
    fn from(err: hier_jacobi::SolverError) -> Self {
        use hier_jacobi::SolverError::*;
        match err {
            InvalidProblem(_) | InvalidArgument(_) | InvalidConfig(_) | TooLarge { .. } => {
                AppError::Usage(err.to_string())
            }
            SingularSystem(_) | NumericalFailure(_) => AppError::Numerical(err.to_string()),
        }
    }
}

impl From<csv::Error> for AppError {
    fn from(err: csv::Error) -> Self {
        AppError::Io(std::io::Error::other(err))
    }
}
