//! Small-scale reference solvers: direct elimination and a power-iteration
//! spectral-radius estimate. These back the test suites and sanity checks;
//! they are size-guarded and make no attempt to scale.

use crate::error::{Result, SolverError};
use crate::grid::SolutionGrid;
use crate::problem::{Problem, StencilProblem1D, StencilProblem2D};

/// Direct solves refuse problems above this DOF count.
pub const DIRECT_SOLVE_DOF_LIMIT: usize = 100_000;

const PIVOT_TOLERANCE: f64 = 1e-300;

fn check_size(dofs: usize) -> Result<()> {
    if dofs > DIRECT_SOLVE_DOF_LIMIT {
        return Err(SolverError::TooLarge {
            dofs,
            limit: DIRECT_SOLVE_DOF_LIMIT,
        });
    }
    Ok(())
}

/// Direct tridiagonal solve (Thomas algorithm, no pivoting). Intended for
/// the diagonally dominant systems this crate builds; a vanishing pivot is
/// reported as a singularity.
pub fn direct_solve_1d(problem: &StencilProblem1D) -> Result<SolutionGrid> {
    let n = problem.n_interior();
    check_size(n)?;
    let (sub, diag, sup) = (problem.sub(), problem.diag(), problem.sup());

    let mut main: Vec<f64> = diag.to_vec();
    let mut rhs: Vec<f64> = problem.rhs().to_vec();
    for i in 1..n {
        if main[i - 1].abs() < PIVOT_TOLERANCE {
            return Err(SolverError::SingularSystem(format!(
                "zero pivot at row {}",
                i - 1
            )));
        }
        let factor = sub[i] / main[i - 1];
        main[i] -= factor * sup[i - 1];
        rhs[i] -= factor * rhs[i - 1];
    }
    if main[n - 1].abs() < PIVOT_TOLERANCE {
        return Err(SolverError::SingularSystem(format!(
            "zero pivot at row {}",
            n - 1
        )));
    }

    let mut x = vec![0.0; n];
    x[n - 1] = rhs[n - 1] / main[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (rhs[i] - sup[i] * x[i + 1]) / main[i];
    }
    SolutionGrid::from_values(problem.shape(), x)
}

/// Direct banded solve for the pentadiagonal 2D system (bandwidth `nx`,
/// no pivoting). Band storage is `(2 nx + 1)` entries per row.
pub fn direct_solve_2d(problem: &StencilProblem2D) -> Result<SolutionGrid> {
    let (nx, ny) = (problem.nx(), problem.ny());
    let n = nx * ny;
    check_size(n)?;
    let p = nx; // half bandwidth
    let width = 2 * p + 1;
    let c = problem.coeffs();

    // band[i][p + (j - i)] = A[i][j]
    let mut band = vec![0.0; n * width];
    for iy in 0..ny {
        for ix in 0..nx {
            let i = iy * nx + ix;
            let row = &mut band[i * width..(i + 1) * width];
            row[p] = c.center;
            if ix > 0 {
                row[p - 1] = c.west;
            }
            if ix + 1 < nx {
                row[p + 1] = c.east;
            }
            if iy > 0 {
                row[0] = c.south;
            }
            if iy + 1 < ny {
                row[2 * p] = c.north;
            }
        }
    }
    let mut rhs: Vec<f64> = problem.rhs().to_vec();

    // Forward elimination within the band.
    for i in 0..n {
        let pivot = band[i * width + p];
        if pivot.abs() < PIVOT_TOLERANCE {
            return Err(SolverError::SingularSystem(format!("zero pivot at row {i}")));
        }
        let last = (i + p).min(n - 1);
        for r in i + 1..=last {
            let offset = r - i;
            let factor = band[r * width + p - offset] / pivot;
            if factor == 0.0 {
                continue;
            }
            band[r * width + p - offset] = 0.0;
            for col in 1..=(n - 1 - i).min(p) {
                band[r * width + p - offset + col] -= factor * band[i * width + p + col];
            }
            rhs[r] -= factor * rhs[i];
        }
    }

    // Back substitution.
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for col in 1..=(n - 1 - i).min(p) {
            acc -= band[i * width + p + col] * x[i + col];
        }
        x[i] = acc / band[i * width + p];
    }
    SolutionGrid::from_values(problem.shape(), x)
}

/// Power-iteration estimate of the Jacobi iteration matrix spectral radius
/// `rho(D^-1 (A - D))`, applied in stencil form. The estimate is the norm
/// ratio of successive iterates, which is non-decreasing for symmetric
/// problems; iteration stops when the relative change drops below 1e-8 or
/// the iteration cap is hit.
pub fn spectral_radius_estimate<P: Problem>(problem: &P, iterations: usize) -> Result<f64> {
    let n = problem.num_dofs();
    check_size(n)?;
    if iterations == 0 {
        return Err(SolverError::InvalidArgument(
            "iteration count must be at least 1".into(),
        ));
    }

    let mut diag = vec![0.0; n];
    problem.diagonal_into(&mut diag);

    // Deterministic start vector with all-positive entries; a plain ones
    // vector can be orthogonal to the dominant mode in contrived cases.
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut x = SolutionGrid::from_values(
        problem.shape(),
        (0..n)
            .map(|_| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                0.5 + (state >> 11) as f64 / (1u64 << 53) as f64
            })
            .collect(),
    )?;

    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let mut ax = vec![0.0; n];
    let mut estimate = 0.0;
    for _ in 0..iterations {
        problem.apply_into(&x, &mut ax)?;
        // y = (D - A) x / D, one entry at a time
        let y: Vec<f64> = x
            .values()
            .iter()
            .zip(&ax)
            .zip(&diag)
            .map(|((xi, axi), d)| xi - axi / d)
            .collect();
        let ny = norm(&y);
        if ny == 0.0 {
            return Ok(0.0);
        }
        let next_estimate = ny / norm(x.values());
        let done = (next_estimate - estimate).abs() <= 1e-8 * next_estimate.max(f64::MIN_POSITIVE);
        estimate = next_estimate;
        x = SolutionGrid::from_values(problem.shape(), y.iter().map(|v| v / ny).collect())?;
        if done {
            break;
        }
    }
    Ok(estimate)
}
