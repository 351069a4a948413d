//! Solver run reports and the per-cycle resource model.

use crate::grid::SolutionGrid;

/// Work-per-cycle figures for a block partition: how many blocks and
/// threads one cycle occupies, and the per-block scratch footprint at
/// 8 bytes per value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceFigures {
    pub operational_blocks: usize,
    pub operational_threads: usize,
    pub shared_bytes_per_block: usize,
}

/// Convergence record of a solver run.
///
/// For the classic solver a cycle is a single sweep
/// (`subiterations_per_cycle == 1`); for the hierarchical solver it is one
/// snapshot/subiterate/write-back round. `residual_history[0]` is the
/// initial residual, followed by one entry per residual check.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub initial_residual: f64,
    pub residual_history: Vec<f64>,
    pub cycles: usize,
    pub subiterations_per_cycle: usize,
    pub total_updates: usize,
    pub converged: bool,
    pub resource: Option<ResourceFigures>,
}

impl ConvergenceReport {
    pub fn final_residual(&self) -> f64 {
        *self
            .residual_history
            .last()
            .unwrap_or(&self.initial_residual)
    }
}

/// Final solution grid together with its convergence report.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub solution: SolutionGrid,
    pub report: ConvergenceReport,
}
