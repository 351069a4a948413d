//! Stencil-form linear systems and their elemental Jacobi updates.
//!
//! A problem stores the matrix in stencil form (per-row tridiagonal
//! coefficients in 1D, five constants in 2D) together with the right-hand
//! side. The grid carries only interior DOFs; the Dirichlet boundary ring
//! is an implicit zero (see [`SolutionGrid`]).

use rayon::prelude::*;

use crate::error::{Result, SolverError};
use crate::grid::{GridShape, SolutionGrid};

/// Below this DOF count sweeps run serially; rayon overhead dominates on
/// tiny grids. Either path produces bitwise-identical output because every
/// entry is computed independently from the immutable current buffer.
pub(crate) const PAR_MIN_DOFS: usize = 1024;

/// Elemental Jacobi update for one tridiagonal row:
/// `(rhs - sub * left - sup * right) / diag`.
pub fn jacobi_update_1d(
    left: f64,
    right: f64,
    rhs: f64,
    sub: f64,
    sup: f64,
    diag: f64,
) -> Result<f64> {
    if diag == 0.0 {
        return Err(SolverError::InvalidProblem(
            "zero diagonal entry in Jacobi update".into(),
        ));
    }
    Ok(update_1d(left, right, rhs, sub, sup, diag))
}

#[inline(always)]
fn update_1d(left: f64, right: f64, rhs: f64, sub: f64, sup: f64, diag: f64) -> f64 {
    (rhs - sub * left - sup * right) / diag
}

/// The five stencil constants of a pentadiagonal 2D system. `west`/`east`
/// multiply the x-neighbors, `south`/`north` the y-neighbors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coeffs2D {
    pub west: f64,
    pub east: f64,
    pub south: f64,
    pub north: f64,
    pub center: f64,
}

/// Elemental Jacobi update for one pentadiagonal row:
/// `(rhs - a*west - c*east - e*south - f*north) / d`.
pub fn jacobi_update_2d(
    west: f64,
    east: f64,
    south: f64,
    north: f64,
    rhs: f64,
    coeffs: Coeffs2D,
) -> Result<f64> {
    if coeffs.center == 0.0 {
        return Err(SolverError::InvalidProblem(
            "zero center coefficient in Jacobi update".into(),
        ));
    }
    Ok(update_2d(west, east, south, north, rhs, coeffs))
}

#[inline(always)]
fn update_2d(west: f64, east: f64, south: f64, north: f64, rhs: f64, c: Coeffs2D) -> f64 {
    (rhs - c.west * west - c.east * east - c.south * south - c.north * north) / c.center
}

/// A tridiagonal system in stencil form with per-row coefficients.
#[derive(Debug, Clone)]
pub struct StencilProblem1D {
    n_interior: usize,
    dx: f64,
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
    rhs: Vec<f64>,
}

impl StencilProblem1D {
    pub fn new(dx: f64, sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>, rhs: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(SolverError::InvalidArgument(
                "problem must have at least one interior DOF".into(),
            ));
        }
        if !dx.is_finite() || dx <= 0.0 {
            return Err(SolverError::InvalidArgument(format!(
                "grid spacing must be positive, got {dx}"
            )));
        }
        if sub.len() != n || sup.len() != n || rhs.len() != n {
            return Err(SolverError::InvalidProblem(format!(
                "coefficient/rhs lengths (sub {}, diag {}, sup {}, rhs {}) disagree",
                sub.len(),
                n,
                sup.len(),
                rhs.len()
            )));
        }
        if let Some(i) = diag.iter().position(|&d| d == 0.0) {
            return Err(SolverError::InvalidProblem(format!(
                "zero diagonal entry at row {i}"
            )));
        }
        Ok(StencilProblem1D {
            n_interior: n,
            dx,
            sub,
            diag,
            sup,
            rhs,
        })
    }

    pub fn n_interior(&self) -> usize {
        self.n_interior
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sup(&self) -> &[f64] {
        &self.sup
    }

    /// Replace the right-hand side (defaults to all ones for the built
    /// Poisson problems).
    pub fn set_rhs(&mut self, rhs: Vec<f64>) -> Result<()> {
        if rhs.len() != self.n_interior {
            return Err(SolverError::InvalidArgument(format!(
                "rhs length {} does not match {} interior DOFs",
                rhs.len(),
                self.n_interior
            )));
        }
        self.rhs = rhs;
        Ok(())
    }
}

/// A pentadiagonal 2D system with constant stencil coefficients.
#[derive(Debug, Clone)]
pub struct StencilProblem2D {
    nx: usize,
    ny: usize,
    dx: f64,
    dy: f64,
    coeffs: Coeffs2D,
    rhs: Vec<f64>,
}

impl StencilProblem2D {
    pub fn new(nx: usize, ny: usize, dx: f64, dy: f64, coeffs: Coeffs2D, rhs: Vec<f64>) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(SolverError::InvalidArgument(
                "problem must have at least one interior DOF per direction".into(),
            ));
        }
        if !dx.is_finite() || dx <= 0.0 || !dy.is_finite() || dy <= 0.0 {
            return Err(SolverError::InvalidArgument(format!(
                "grid spacings must be positive, got dx={dx} dy={dy}"
            )));
        }
        if coeffs.center == 0.0 {
            return Err(SolverError::InvalidProblem(
                "zero center coefficient".into(),
            ));
        }
        if rhs.len() != nx * ny {
            return Err(SolverError::InvalidProblem(format!(
                "rhs length {} does not match {}x{} interior DOFs",
                rhs.len(),
                nx,
                ny
            )));
        }
        Ok(StencilProblem2D {
            nx,
            ny,
            dx,
            dy,
            coeffs,
            rhs,
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dy(&self) -> f64 {
        self.dy
    }

    pub fn coeffs(&self) -> Coeffs2D {
        self.coeffs
    }

    pub fn set_rhs(&mut self, rhs: Vec<f64>) -> Result<()> {
        if rhs.len() != self.nx * self.ny {
            return Err(SolverError::InvalidArgument(format!(
                "rhs length {} does not match {}x{} interior DOFs",
                rhs.len(),
                self.nx,
                self.ny
            )));
        }
        self.rhs = rhs;
        Ok(())
    }
}

/// Finite-difference Poisson system `-u'' = f` on the unit interval with
/// homogeneous Dirichlet boundaries and an all-ones right-hand side:
/// `dx = 1/(n+1)`, row stencil `(-1, 2, -1)/dx^2`.
pub fn build_poisson_1d(n_interior: usize) -> Result<StencilProblem1D> {
    if n_interior == 0 {
        return Err(SolverError::InvalidArgument(
            "interior DOF count must be at least 1".into(),
        ));
    }
    let dx = 1.0 / (n_interior as f64 + 1.0);
    let off = -1.0 / (dx * dx);
    let center = 2.0 / (dx * dx);
    StencilProblem1D::new(
        dx,
        vec![off; n_interior],
        vec![center; n_interior],
        vec![off; n_interior],
        vec![1.0; n_interior],
    )
}

/// Finite-difference Poisson system on the unit square with homogeneous
/// Dirichlet boundaries and an all-ones right-hand side. The center
/// coefficient is `2/dx^2 + 2/dy^2`, matching the elemental update.
pub fn build_poisson_2d(nx: usize, ny: usize) -> Result<StencilProblem2D> {
    if nx == 0 || ny == 0 {
        return Err(SolverError::InvalidArgument(
            "interior DOF counts must be at least 1".into(),
        ));
    }
    let dx = 1.0 / (nx as f64 + 1.0);
    let dy = 1.0 / (ny as f64 + 1.0);
    let cx = -1.0 / (dx * dx);
    let cy = -1.0 / (dy * dy);
    let coeffs = Coeffs2D {
        west: cx,
        east: cx,
        south: cy,
        north: cy,
        center: 2.0 / (dx * dx) + 2.0 / (dy * dy),
    };
    StencilProblem2D::new(nx, ny, dx, dy, coeffs, vec![1.0; nx * ny])
}

/// A structured linear system that supports stencil application and full
/// Jacobi sweeps. All operations are pure with respect to the problem and
/// read-only inputs, so values are freely shareable across threads.
pub trait Problem: Sync {
    fn shape(&self) -> GridShape;

    fn rhs(&self) -> &[f64];

    /// Copies the matrix diagonal into `out`.
    fn diagonal_into(&self, out: &mut [f64]);

    /// `out = A x`, applying the stencil with the zero Dirichlet halo.
    fn apply_into(&self, x: &SolutionGrid, out: &mut [f64]) -> Result<()>;

    /// One full Jacobi sweep: every entry of `next` is the elemental
    /// update computed from `current` alone.
    fn sweep_into(&self, current: &SolutionGrid, next: &mut [f64]) -> Result<()>;

    fn num_dofs(&self) -> usize {
        self.shape().num_dofs()
    }

    fn check_grid(&self, grid: &SolutionGrid) -> Result<()> {
        if grid.shape() != self.shape() {
            return Err(SolverError::InvalidArgument(format!(
                "grid shape {:?} does not match problem shape {:?}",
                grid.shape(),
                self.shape()
            )));
        }
        Ok(())
    }
}

impl Problem for StencilProblem1D {
    fn shape(&self) -> GridShape {
        GridShape::OneDim { n: self.n_interior }
    }

    fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    fn diagonal_into(&self, out: &mut [f64]) {
        out.copy_from_slice(&self.diag);
    }

    fn apply_into(&self, x: &SolutionGrid, out: &mut [f64]) -> Result<()> {
        self.check_grid(x)?;
        let v = x.values();
        let n = self.n_interior;
        for i in 0..n {
            let left = if i == 0 { 0.0 } else { v[i - 1] };
            let right = if i + 1 == n { 0.0 } else { v[i + 1] };
            out[i] = self.sub[i] * left + self.diag[i] * v[i] + self.sup[i] * right;
        }
        Ok(())
    }

    fn sweep_into(&self, current: &SolutionGrid, next: &mut [f64]) -> Result<()> {
        self.check_grid(current)?;
        let v = current.values();
        let n = self.n_interior;
        let row = |i: usize| {
            let left = if i == 0 { 0.0 } else { v[i - 1] };
            let right = if i + 1 == n { 0.0 } else { v[i + 1] };
            update_1d(left, right, self.rhs[i], self.sub[i], self.sup[i], self.diag[i])
        };
        if n >= PAR_MIN_DOFS {
            next.par_iter_mut()
                .enumerate()
                .for_each(|(i, out)| *out = row(i));
        } else {
            for (i, out) in next.iter_mut().enumerate() {
                *out = row(i);
            }
        }
        Ok(())
    }
}

impl Problem for StencilProblem2D {
    fn shape(&self) -> GridShape {
        GridShape::TwoDim {
            nx: self.nx,
            ny: self.ny,
        }
    }

    fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    fn diagonal_into(&self, out: &mut [f64]) {
        out.fill(self.coeffs.center);
    }

    fn apply_into(&self, x: &SolutionGrid, out: &mut [f64]) -> Result<()> {
        self.check_grid(x)?;
        let v = x.values();
        let (nx, ny) = (self.nx, self.ny);
        let c = self.coeffs;
        for iy in 0..ny {
            for ix in 0..nx {
                let idx = iy * nx + ix;
                let west = if ix == 0 { 0.0 } else { v[idx - 1] };
                let east = if ix + 1 == nx { 0.0 } else { v[idx + 1] };
                let south = if iy == 0 { 0.0 } else { v[idx - nx] };
                let north = if iy + 1 == ny { 0.0 } else { v[idx + nx] };
                out[idx] = c.west * west
                    + c.east * east
                    + c.south * south
                    + c.north * north
                    + c.center * v[idx];
            }
        }
        Ok(())
    }

    fn sweep_into(&self, current: &SolutionGrid, next: &mut [f64]) -> Result<()> {
        self.check_grid(current)?;
        let v = current.values();
        let (nx, ny) = (self.nx, self.ny);
        let c = self.coeffs;
        let sweep_row = |iy: usize, out_row: &mut [f64]| {
            for (ix, out) in out_row.iter_mut().enumerate() {
                let idx = iy * nx + ix;
                let west = if ix == 0 { 0.0 } else { v[idx - 1] };
                let east = if ix + 1 == nx { 0.0 } else { v[idx + 1] };
                let south = if iy == 0 { 0.0 } else { v[idx - nx] };
                let north = if iy + 1 == ny { 0.0 } else { v[idx + nx] };
                *out = update_2d(west, east, south, north, self.rhs[idx], c);
            }
        };
        if nx * ny >= PAR_MIN_DOFS {
            next.par_chunks_mut(nx)
                .enumerate()
                .for_each(|(iy, out_row)| sweep_row(iy, out_row));
        } else {
            for (iy, out_row) in next.chunks_mut(nx).enumerate() {
                sweep_row(iy, out_row);
            }
        }
        Ok(())
    }
}

/// L2 norm of `b - A x`, computed by applying the stencil with the zero
/// Dirichlet halo to the interior values.
pub fn residual_norm<P: Problem>(problem: &P, grid: &SolutionGrid) -> Result<f64> {
    problem.check_grid(grid)?;
    let mut ax = vec![0.0; problem.num_dofs()];
    problem.apply_into(grid, &mut ax)?;
    let sum: f64 = problem
        .rhs()
        .iter()
        .zip(&ax)
        .map(|(b, a)| {
            let r = b - a;
            r * r
        })
        .sum();
    Ok(sum.sqrt())
}
