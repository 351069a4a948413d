//! Hierarchical block-synchronous Jacobi iteration.
//!
//! Each cycle takes the global solution as an immutable snapshot,
//! partitions the interior into halo-augmented (optionally overlapping)
//! subdomains, runs `k` block-local Jacobi subiterations per subdomain
//! with halo values frozen, and writes every block's owned range back into
//! the global array before the next residual check. With `k = 1` and no
//! overlap this reproduces classic Jacobi iteration exactly.

mod cycle;
mod plan;

pub use cycle::{hier_cycle, run_block_cycle, BlockJacobi, BlockWorkspace};
pub use plan::{
    make_block_plan, partition_axis, resource_figures, AxisBlocking, AxisSpan, BlockDescriptor,
    BlockPlan, Blocking, HierConfig, DEFAULT_MAX_CYCLES, DEFAULT_TOLERANCE_FACTOR,
};

use crate::error::{Result, SolverError};
use crate::grid::SolutionGrid;
use crate::problem::residual_norm;
use crate::report::{ConvergenceReport, SolveResult};

/// Runs block-synchronous cycles until the residual drops below
/// `tolerance_factor` times the initial residual or `max_cycles` is hit
/// (reported as `converged = false`). The outcome is bitwise deterministic
/// regardless of how block executions are scheduled.
pub fn hier_solve<P: BlockJacobi>(
    problem: &P,
    initial_guess: &SolutionGrid,
    config: &HierConfig,
) -> Result<SolveResult> {
    config.validate()?;
    problem.check_grid(initial_guess)?;
    let plan = make_block_plan(problem.shape(), config)?;
    let resources = resource_figures(problem.shape(), config)?;
    let k = config.subiterations;

    let initial_residual = residual_norm(problem, initial_guess)?;
    if !initial_residual.is_finite() {
        return Err(SolverError::NumericalFailure(format!(
            "initial residual is {initial_residual}"
        )));
    }
    let threshold = config.tolerance_factor * initial_residual;
    let mut history = vec![initial_residual];

    if initial_residual <= threshold {
        return Ok(SolveResult {
            solution: initial_guess.clone(),
            report: ConvergenceReport {
                initial_residual,
                residual_history: history,
                cycles: 0,
                subiterations_per_cycle: k,
                total_updates: 0,
                converged: true,
                resource: Some(resources),
            },
        });
    }

    let mut workspaces: Vec<BlockWorkspace> =
        plan.blocks().map(|b| BlockWorkspace::for_block(&b)).collect();
    let mut owned: Vec<Vec<f64>> = vec![Vec::new(); plan.num_blocks()];
    let mut current = initial_guess.clone();
    // Owned ranges tile the interior exactly, so every entry of the target
    // buffer is overwritten each cycle and swapping is equivalent to
    // writing into a fresh array.
    let mut next = SolutionGrid::zeros(problem.shape());
    let mut cycles = 0;
    let mut converged = false;

    while cycles < config.max_cycles {
        cycle::run_cycle_into(
            problem,
            &current,
            &plan,
            k,
            &mut workspaces,
            &mut owned,
            next.values_mut(),
        )?;
        std::mem::swap(&mut current, &mut next);
        cycles += 1;

        let r = residual_norm(problem, &current)?;
        if !r.is_finite() {
            return Err(SolverError::NumericalFailure(format!(
                "residual became {r} at cycle {cycles}"
            )));
        }
        history.push(r);
        if r <= threshold {
            converged = true;
            break;
        }
    }

    Ok(SolveResult {
        solution: current,
        report: ConvergenceReport {
            initial_residual,
            residual_history: history,
            cycles,
            subiterations_per_cycle: k,
            total_updates: cycles * k,
            converged,
            resource: Some(resources),
        },
    })
}
