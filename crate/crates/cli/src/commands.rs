//! The three commands: single solve, (k, overlap) sweep, resource table.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use hier_jacobi::{
    classic_solve, hier_solve, resource_figures, ClassicSolveConfig, ConvergenceReport, Problem,
    ResourceFigures, SolutionGrid, SolveResult,
};

use crate::records::{ResourceRecord, SweepRecord};
use crate::spec::{BuiltProblem, ExperimentSpec, Mode};
use crate::AppError;

/// Runs a single solve and prints a human-readable convergence summary.
/// The caller maps `converged = false` to a non-zero exit status.
pub fn cmd_solve(spec: &ExperimentSpec) -> Result<ConvergenceReport, AppError> {
    let hier = spec.mode == Mode::Hier;
    spec.validate(hier)?;
    if spec.k_list.len() != 1 {
        return Err(AppError::Usage(
            "--subiterations takes exactly one value in solve mode".into(),
        ));
    }
    if spec.overlap_list.len() != 1 {
        return Err(AppError::Usage(
            "--overlap takes exactly one value in solve mode".into(),
        ));
    }
    let k = spec.k_list[0];
    let overlap = spec.overlap_list[0];

    let problem = spec.build_problem()?;
    let result = match (&problem, hier) {
        (BuiltProblem::OneDim(p), true) => hier_solve(p, &ones(p), &spec.hier_config(k, overlap))?,
        (BuiltProblem::TwoDim(p), true) => hier_solve(p, &ones(p), &spec.hier_config(k, overlap))?,
        (BuiltProblem::OneDim(p), false) => classic_solve(p, &ones(p), &classic_config(spec))?,
        (BuiltProblem::TwoDim(p), false) => classic_solve(p, &ones(p), &classic_config(spec))?,
    };
    print_solve_summary(spec, k, overlap, &result);
    Ok(result.report)
}

fn ones<P: Problem>(problem: &P) -> SolutionGrid {
    SolutionGrid::ones(problem.shape())
}

fn classic_config(spec: &ExperimentSpec) -> ClassicSolveConfig {
    ClassicSolveConfig {
        tolerance_factor: spec.tolerance_factor,
        max_iterations: spec.max_cycles,
        residual_check_interval: 1,
    }
}

fn print_solve_summary(spec: &ExperimentSpec, k: usize, overlap: usize, result: &SolveResult) {
    let report = &result.report;
    if spec.dim == 1 {
        println!("problem: 1D Poisson, n = {}", spec.nx);
    } else {
        println!("problem: 2D Poisson, {} x {}", spec.nx, spec.ny);
    }
    match spec.mode {
        Mode::Classic => println!("mode: classic"),
        Mode::Hier => {
            if spec.dim == 1 {
                println!("mode: hier  tpb = {}  k = {k}  overlap = {overlap}", spec.tpb_x);
            } else {
                println!(
                    "mode: hier  tpb = {} x {}  k = {k}  overlap = {overlap} x {}",
                    spec.tpb_x,
                    spec.tpb_y,
                    spec.overlap_y.unwrap_or(overlap)
                );
            }
            if let Some(f) = report.resource {
                println!(
                    "resources: {} blocks, {} threads, {} shared bytes/block",
                    f.operational_blocks, f.operational_threads, f.shared_bytes_per_block
                );
            }
            if !warp_aligned(spec) {
                println!("note: tpb is not a multiple of the 32-thread warp width");
            }
        }
    }
    println!("initial residual: {:e}", report.initial_residual);
    println!("final residual:   {:e}", report.final_residual());
    println!(
        "cycles: {}   total subiterations: {}",
        report.cycles, report.total_updates
    );
    println!("converged: {}", if report.converged { "yes" } else { "no" });
}

fn warp_aligned(spec: &ExperimentSpec) -> bool {
    spec.tpb_x.is_multiple_of(32) && (spec.dim == 1 || spec.tpb_y.is_multiple_of(32))
}

/// Runs the hierarchical solver over every (k, overlap) combination and
/// writes one CSV row per pair, ordered by (k, overlap). The file is
/// written atomically: a failed run leaves no partial output behind.
pub fn cmd_sweep(spec: &ExperimentSpec) -> Result<Vec<SweepRecord>, AppError> {
    spec.validate(true)?;
    let Some(out) = &spec.out else {
        return Err(AppError::Usage("--out is required in sweep mode".into()));
    };
    if spec.dim == 2 {
        if spec.ny != spec.nx {
            return Err(AppError::Usage(
                "--ny must equal --n in sweep mode (rows carry a single n column)".into(),
            ));
        }
        if spec.tpb_y != spec.tpb_x {
            return Err(AppError::Usage(
                "--tpb-y must equal --tpb in sweep mode (rows carry a single tpb column)".into(),
            ));
        }
        if spec.overlap_y.is_some() {
            return Err(AppError::Usage(
                "--overlap-y is not available in sweep mode (overlap applies per direction)"
                    .into(),
            ));
        }
    }

    let problem = spec.build_problem()?;
    let pairs: Vec<(usize, usize)> = spec
        .k_list
        .iter()
        .flat_map(|&k| spec.overlap_list.iter().map(move |&o| (k, o)))
        .collect();

    let records = pairs
        .par_iter()
        .map(|&(k, overlap)| -> Result<SweepRecord, AppError> {
            let result = match &problem {
                BuiltProblem::OneDim(p) => hier_solve(p, &ones(p), &spec.hier_config(k, overlap))?,
                BuiltProblem::TwoDim(p) => hier_solve(p, &ones(p), &spec.hier_config(k, overlap))?,
            };
            let report = result.report;
            let f = report.resource.expect("hier report always carries figures");
            Ok(SweepRecord {
                dim: spec.dim,
                n: spec.nx,
                tpb: spec.tpb_x,
                k,
                overlap,
                cycles: report.cycles,
                total_subiterations: report.total_updates,
                final_residual: report.final_residual(),
                converged: report.converged,
                operational_blocks: f.operational_blocks,
                operational_threads: f.operational_threads,
                shared_bytes_per_block: f.shared_bytes_per_block,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    write_csv_atomic(out, &records)?;
    Ok(records)
}

/// Tabulates the resource model across the overlap list without running
/// any solves; optionally writes the table as CSV.
pub fn cmd_resources(spec: &ExperimentSpec) -> Result<Vec<ResourceRecord>, AppError> {
    spec.validate(true)?;
    let shape = match spec.dim {
        1 => hier_jacobi::GridShape::OneDim { n: spec.nx },
        _ => hier_jacobi::GridShape::TwoDim {
            nx: spec.nx,
            ny: spec.ny,
        },
    };

    let mut records = Vec::with_capacity(spec.overlap_list.len());
    for &overlap in &spec.overlap_list {
        let f: ResourceFigures = resource_figures(shape, &spec.hier_config(1, overlap))?;
        records.push(ResourceRecord {
            dim: spec.dim,
            n: spec.nx,
            tpb: spec.tpb_x,
            overlap,
            operational_blocks: f.operational_blocks,
            operational_threads: f.operational_threads,
            shared_bytes_per_block: f.shared_bytes_per_block,
        });
    }

    if spec.dim == 1 {
        println!("resource model: 1D, n = {}, tpb = {}", spec.nx, spec.tpb_x);
    } else {
        println!(
            "resource model: 2D, {} x {}, tpb = {} x {}",
            spec.nx, spec.ny, spec.tpb_x, spec.tpb_y
        );
    }
    if !warp_aligned(spec) {
        println!("note: tpb is not a multiple of the 32-thread warp width");
    }
    println!("{:>8} {:>8} {:>10} {:>24}", "overlap", "blocks", "threads", "shared_bytes_per_block");
    for r in &records {
        println!(
            "{:>8} {:>8} {:>10} {:>24}",
            r.overlap, r.operational_blocks, r.operational_threads, r.shared_bytes_per_block
        );
    }

    if let Some(out) = &spec.out {
        write_csv_atomic(out, &records)?;
    }
    Ok(records)
}

/// Serializes rows into a temp file in the target directory, then renames
/// it over the destination.
fn write_csv_atomic<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), AppError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut writer = csv::Writer::from_writer(&mut tmp);
        for row in rows {
            writer.serialize(row)?;
        }
        writer.flush()?;
    }
    tmp.as_file_mut().sync_all()?;
    tmp.persist(path).map_err(|e| AppError::Io(e.error))?;
    Ok(())
}
