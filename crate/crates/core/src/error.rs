//! Error type shared across the solver crate.

use thiserror::Error;

/// Errors produced by problem construction, solvers and oracles.
#[derive(Debug, Error)]
pub enum SolverError {
    /// The linear system itself is malformed (zero diagonal, bad
    /// coefficient lengths, ...).
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    /// An argument violates an operation precondition (shape mismatch,
    /// zero size, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A solver configuration violates its invariants (tpb larger than
    /// the grid, odd overlap, ...).
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// Direct elimination hit a zero pivot.
    #[error("singular system: {0}")]
    SingularSystem(String),

    /// A size-guarded oracle refused to run.
    #[error("problem too large: {dofs} DOFs exceeds the limit of {limit}")]
    TooLarge { dofs: usize, limit: usize },

    /// The iteration produced a non-finite residual.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

pub type Result<T> = std::result::Result<T, SolverError>;
