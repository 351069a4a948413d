//! Jacobi solvers for structured 1D/2D stencil problems.
//!
//! Two solver families share the same problem types:
//!
//! * [`classic_solve`] -- full-grid Jacobi iteration with double buffering,
//!   one residual check per sweep.
//! * [`hier_solve`] -- block-synchronous Jacobi: the interior is cut into
//!   halo-augmented, optionally overlapping subdomains, each of which runs
//!   `k` local subiterations per cycle on private buffers before its owned
//!   range is written back. With `k = 1` and no overlap the two solvers
//!   produce bitwise-identical iterates.
//!
//! [`oracle`] provides size-guarded direct solves and a spectral-radius
//! estimate for validation, and [`resource_figures`] evaluates the
//! work-per-cycle model of a block partition.

pub mod classic;
pub mod error;
pub mod grid;
pub mod hier;
pub mod oracle;
pub mod problem;
pub mod report;

pub use classic::{classic_solve, classic_sweep, ClassicSolveConfig};
pub use error::{Result, SolverError};
pub use grid::{GridShape, SolutionGrid};
pub use hier::{
    hier_cycle, hier_solve, make_block_plan, resource_figures, run_block_cycle, AxisBlocking,
    AxisSpan, BlockDescriptor, BlockJacobi, BlockPlan, BlockWorkspace, Blocking, HierConfig,
};
pub use problem::{
    build_poisson_1d, build_poisson_2d, jacobi_update_1d, jacobi_update_2d, residual_norm,
    Coeffs2D, Problem, StencilProblem1D, StencilProblem2D,
};
pub use report::{ConvergenceReport, ResourceFigures, SolveResult};
