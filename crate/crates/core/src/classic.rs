//! Full-grid Jacobi iteration with double buffering.
//!
//! This is the reference the hierarchical solver is compared against: one
//! sweep updates every interior DOF from the previous iterate, then the two
//! buffers swap handles.

use crate::error::{Result, SolverError};
use crate::grid::SolutionGrid;
use crate::problem::{residual_norm, Problem};
use crate::report::{ConvergenceReport, SolveResult};

/// Stopping rule and safety caps for [`classic_solve`].
#[derive(Debug, Clone)]
pub struct ClassicSolveConfig {
    /// Converged once the residual drops below this factor times the
    /// initial residual.
    pub tolerance_factor: f64,
    /// Hard cap on sweeps.
    pub max_iterations: usize,
    /// Sweeps between residual evaluations.
    pub residual_check_interval: usize,
}

impl Default for ClassicSolveConfig {
    fn default() -> Self {
        ClassicSolveConfig {
            tolerance_factor: 1e-4,
            max_iterations: 10_000_000,
            residual_check_interval: 1,
        }
    }
}

impl ClassicSolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance_factor > 0.0 && self.tolerance_factor < 1.0) {
            return Err(SolverError::InvalidConfig(format!(
                "tolerance factor must lie in (0, 1), got {}",
                self.tolerance_factor
            )));
        }
        if self.max_iterations == 0 {
            return Err(SolverError::InvalidConfig(
                "max iterations must be at least 1".into(),
            ));
        }
        if self.residual_check_interval == 0 {
            return Err(SolverError::InvalidConfig(
                "residual check interval must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// One full Jacobi sweep. Every interior DOF of `next` is the elemental
/// update computed entirely from `current`; `current` is not touched.
pub fn classic_sweep<P: Problem>(
    problem: &P,
    current: &SolutionGrid,
    next: &mut SolutionGrid,
) -> Result<()> {
    problem.check_grid(current)?;
    problem.check_grid(next)?;
    problem.sweep_into(current, next.values_mut())
}

/// Runs Jacobi iteration until the residual has dropped below
/// `tolerance_factor` times the initial residual, or the iteration cap is
/// reached (reported as `converged = false`, not an error).
pub fn classic_solve<P: Problem>(
    problem: &P,
    initial_guess: &SolutionGrid,
    config: &ClassicSolveConfig,
) -> Result<SolveResult> {
    config.validate()?;
    problem.check_grid(initial_guess)?;

    let initial_residual = residual_norm(problem, initial_guess)?;
    if !initial_residual.is_finite() {
        return Err(SolverError::NumericalFailure(format!(
            "initial residual is {initial_residual}"
        )));
    }
    let threshold = config.tolerance_factor * initial_residual;
    let mut history = vec![initial_residual];

    if initial_residual <= threshold {
        // Only possible at an exact fixed point (residual 0).
        return Ok(SolveResult {
            solution: initial_guess.clone(),
            report: ConvergenceReport {
                initial_residual,
                residual_history: history,
                cycles: 0,
                subiterations_per_cycle: 1,
                total_updates: 0,
                converged: true,
                resource: None,
            },
        });
    }

    let mut current = initial_guess.clone();
    let mut next = SolutionGrid::zeros(problem.shape());
    let mut iterations = 0;
    let mut converged = false;

    while iterations < config.max_iterations {
        problem.sweep_into(&current, next.values_mut())?;
        std::mem::swap(&mut current, &mut next);
        iterations += 1;

        if iterations % config.residual_check_interval == 0
            || iterations == config.max_iterations
        {
            let r = residual_norm(problem, &current)?;
            if !r.is_finite() {
                return Err(SolverError::NumericalFailure(format!(
                    "residual became {r} at iteration {iterations}"
                )));
            }
            history.push(r);
            if r <= threshold {
                converged = true;
                break;
            }
        }
    }

    Ok(SolveResult {
        solution: current,
        report: ConvergenceReport {
            initial_residual,
            residual_history: history,
            cycles: iterations,
            subiterations_per_cycle: 1,
            total_updates: iterations,
            converged,
            resource: None,
        },
    })
}
