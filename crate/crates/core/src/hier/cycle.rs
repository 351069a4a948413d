//! Block-local Jacobi cycles on private double-buffered workspaces.
//!
//! A cycle reads a halo-augmented copy of the global snapshot into the
//! block's workspace, performs `k` Jacobi subiterations with the halo
//! values frozen at their snapshot state, and hands back the owned
//! sub-range of the final interior values. Blocks never observe each
//! other's work within a cycle, so any execution order gives bitwise
//! identical results.

use rayon::prelude::*;

use crate::error::{Result, SolverError};
use crate::grid::{GridShape, SolutionGrid};
use crate::hier::plan::{BlockDescriptor, BlockPlan};
use crate::problem::{Problem, StencilProblem1D, StencilProblem2D, PAR_MIN_DOFS};

/// One block's private storage: two halo-sized solution buffers and the
/// interior-sized right-hand side, mirroring the shared-memory layout the
/// partition is modeled on. `parity` tracks which buffer holds the newest
/// values.
#[derive(Debug, Clone)]
pub struct BlockWorkspace {
    buf0: Vec<f64>,
    buf1: Vec<f64>,
    local_rhs: Vec<f64>,
    parity: bool,
}

impl BlockWorkspace {
    /// Workspace for a 1D block of `tpb` interior points.
    pub fn new_1d(tpb: usize) -> Self {
        BlockWorkspace {
            buf0: vec![0.0; tpb + 2],
            buf1: vec![0.0; tpb + 2],
            local_rhs: vec![0.0; tpb],
            parity: false,
        }
    }

    /// Workspace for a 2D block of `tpb_x` by `tpb_y` interior points.
    pub fn new_2d(tpb_x: usize, tpb_y: usize) -> Self {
        BlockWorkspace {
            buf0: vec![0.0; (tpb_x + 2) * (tpb_y + 2)],
            buf1: vec![0.0; (tpb_x + 2) * (tpb_y + 2)],
            local_rhs: vec![0.0; tpb_x * tpb_y],
            parity: false,
        }
    }

    pub fn for_block(block: &BlockDescriptor) -> Self {
        match block.y {
            None => Self::new_1d(block.x.interior_len),
            Some(y) => Self::new_2d(block.x.interior_len, y.interior_len),
        }
    }

    /// Storage footprint in 8-byte values: `2 * (tpb + 2) + tpb` in 1D and
    /// `2 * (tpb_x + 2) * (tpb_y + 2) + tpb_x * tpb_y` in 2D.
    pub fn footprint_values(&self) -> usize {
        self.buf0.len() + self.buf1.len() + self.local_rhs.len()
    }

    pub fn footprint_bytes(&self) -> usize {
        8 * self.footprint_values()
    }

    fn fit_1d(&mut self, tpb: usize) {
        if self.buf0.len() != tpb + 2 || self.local_rhs.len() != tpb {
            *self = Self::new_1d(tpb);
        }
    }

    fn fit_2d(&mut self, tpb_x: usize, tpb_y: usize) {
        if self.buf0.len() != (tpb_x + 2) * (tpb_y + 2) || self.local_rhs.len() != tpb_x * tpb_y {
            *self = Self::new_2d(tpb_x, tpb_y);
        }
    }
}

/// A problem whose Jacobi iteration can run as halo-frozen block-local
/// subiterations.
pub trait BlockJacobi: Problem {
    /// Runs one cycle for a single block against an immutable snapshot:
    /// copy-in (the boundary ring contributing zeros), `k` double-buffered
    /// subiterations with frozen halo values, then the owned sub-range of
    /// the final interior values is written to `out` (row-major, x
    /// fastest). The workspace is resized if it does not fit the block.
    fn block_cycle_into(
        &self,
        snapshot: &SolutionGrid,
        block: &BlockDescriptor,
        subiterations: usize,
        workspace: &mut BlockWorkspace,
        out: &mut Vec<f64>,
    ) -> Result<()>;
}

impl BlockJacobi for StencilProblem1D {
    fn block_cycle_into(
        &self,
        snapshot: &SolutionGrid,
        block: &BlockDescriptor,
        subiterations: usize,
        workspace: &mut BlockWorkspace,
        out: &mut Vec<f64>,
    ) -> Result<()> {
        self.check_grid(snapshot)?;
        if block.y.is_some() {
            return Err(SolverError::InvalidArgument(
                "2D block descriptor applied to a 1D problem".into(),
            ));
        }
        let span = block.x;
        if span.interior_end() > self.n_interior() {
            return Err(SolverError::InvalidArgument(format!(
                "block interior {}..{} exceeds the grid ({})",
                span.interior_start,
                span.interior_end(),
                self.n_interior()
            )));
        }
        let tpb = span.interior_len;
        workspace.fit_1d(tpb);
        let BlockWorkspace {
            buf0,
            buf1,
            local_rhs,
            parity,
        } = workspace;

        // Step 1: copy the halo-augmented subdomain into both buffers so
        // the halo entries stay at their snapshot values for all
        // subiterations.
        for (l, (v0, v1)) in buf0.iter_mut().zip(buf1.iter_mut()).enumerate() {
            let v = snapshot.at_1d(span.interior_start as isize + l as isize - 1);
            *v0 = v;
            *v1 = v;
        }
        local_rhs.copy_from_slice(&self.rhs()[span.interior_start..span.interior_end()]);
        *parity = false;

        // Step 2: k subiterations on the interior points.
        let (sub, diag, sup) = (self.sub(), self.diag(), self.sup());
        for _ in 0..subiterations {
            let (cur, next) = if *parity {
                (&*buf1, &mut *buf0)
            } else {
                (&*buf0, &mut *buf1)
            };
            for li in 1..=tpb {
                let g = span.interior_start + li - 1;
                next[li] = (local_rhs[li - 1] - sub[g] * cur[li - 1] - sup[g] * cur[li + 1])
                    / diag[g];
            }
            *parity = !*parity;
        }

        // Step 3: hand back the owned sub-range.
        let cur = if *parity { &*buf1 } else { &*buf0 };
        let lo = span.owned_start - span.interior_start + 1;
        out.clear();
        out.extend_from_slice(&cur[lo..lo + span.owned_len]);
        Ok(())
    }
}

impl BlockJacobi for StencilProblem2D {
    fn block_cycle_into(
        &self,
        snapshot: &SolutionGrid,
        block: &BlockDescriptor,
        subiterations: usize,
        workspace: &mut BlockWorkspace,
        out: &mut Vec<f64>,
    ) -> Result<()> {
        self.check_grid(snapshot)?;
        let Some(span_y) = block.y else {
            return Err(SolverError::InvalidArgument(
                "1D block descriptor applied to a 2D problem".into(),
            ));
        };
        let span_x = block.x;
        if span_x.interior_end() > self.nx() || span_y.interior_end() > self.ny() {
            return Err(SolverError::InvalidArgument(format!(
                "block interior {}..{} x {}..{} exceeds the {}x{} grid",
                span_x.interior_start,
                span_x.interior_end(),
                span_y.interior_start,
                span_y.interior_end(),
                self.nx(),
                self.ny()
            )));
        }
        let (tx, ty) = (span_x.interior_len, span_y.interior_len);
        let w = tx + 2;
        workspace.fit_2d(tx, ty);
        let BlockWorkspace {
            buf0,
            buf1,
            local_rhs,
            parity,
        } = workspace;

        for ly in 0..ty + 2 {
            let gy = span_y.interior_start as isize + ly as isize - 1;
            for lx in 0..w {
                let gx = span_x.interior_start as isize + lx as isize - 1;
                let v = snapshot.at_2d(gx, gy);
                buf0[ly * w + lx] = v;
                buf1[ly * w + lx] = v;
            }
        }
        let nx = self.nx();
        for ly in 0..ty {
            let g = (span_y.interior_start + ly) * nx + span_x.interior_start;
            local_rhs[ly * tx..(ly + 1) * tx].copy_from_slice(&self.rhs()[g..g + tx]);
        }
        *parity = false;

        let c = self.coeffs();
        for _ in 0..subiterations {
            let (cur, next) = if *parity {
                (&*buf1, &mut *buf0)
            } else {
                (&*buf0, &mut *buf1)
            };
            for ly in 1..=ty {
                for lx in 1..=tx {
                    let idx = ly * w + lx;
                    next[idx] = (local_rhs[(ly - 1) * tx + lx - 1]
                        - c.west * cur[idx - 1]
                        - c.east * cur[idx + 1]
                        - c.south * cur[idx - w]
                        - c.north * cur[idx + w])
                        / c.center;
                }
            }
            *parity = !*parity;
        }

        let cur = if *parity { &*buf1 } else { &*buf0 };
        let lx0 = span_x.owned_start - span_x.interior_start + 1;
        let ly0 = span_y.owned_start - span_y.interior_start + 1;
        out.clear();
        out.reserve(span_x.owned_len * span_y.owned_len);
        for ly in 0..span_y.owned_len {
            let row = (ly0 + ly) * w + lx0;
            out.extend_from_slice(&cur[row..row + span_x.owned_len]);
        }
        Ok(())
    }
}

/// One halo-frozen cycle for a single block; returns the owned values.
/// The snapshot is read-only throughout.
pub fn run_block_cycle<P: BlockJacobi>(
    problem: &P,
    snapshot: &SolutionGrid,
    block: &BlockDescriptor,
    subiterations: usize,
) -> Result<Vec<f64>> {
    if subiterations == 0 {
        return Err(SolverError::InvalidArgument(
            "subiteration count must be at least 1".into(),
        ));
    }
    let mut workspace = BlockWorkspace::for_block(block);
    let mut out = Vec::new();
    problem.block_cycle_into(snapshot, block, subiterations, &mut workspace, &mut out)?;
    Ok(out)
}

fn scatter_owned(shape: GridShape, block: &BlockDescriptor, owned: &[f64], next: &mut [f64]) {
    match (shape, block.y) {
        (GridShape::OneDim { .. }, None) => {
            next[block.x.owned_start..block.x.owned_end()].copy_from_slice(owned);
        }
        (GridShape::TwoDim { nx, .. }, Some(span_y)) => {
            let span_x = block.x;
            for ly in 0..span_y.owned_len {
                let g = (span_y.owned_start + ly) * nx + span_x.owned_start;
                next[g..g + span_x.owned_len]
                    .copy_from_slice(&owned[ly * span_x.owned_len..(ly + 1) * span_x.owned_len]);
            }
        }
        _ => unreachable!("block descriptor dimensionality checked upstream"),
    }
}

/// Runs every block of the plan against the snapshot and writes all owned
/// results into `next`. Blocks run in parallel when the grid is large
/// enough for that to pay off; the result is identical either way.
pub(crate) fn run_cycle_into<P: BlockJacobi>(
    problem: &P,
    snapshot: &SolutionGrid,
    plan: &BlockPlan,
    subiterations: usize,
    workspaces: &mut [BlockWorkspace],
    owned: &mut [Vec<f64>],
    next: &mut [f64],
) -> Result<()> {
    let parallel = problem.num_dofs() >= PAR_MIN_DOFS && plan.num_blocks() > 1;
    if parallel {
        workspaces
            .par_iter_mut()
            .zip(owned.par_iter_mut())
            .enumerate()
            .try_for_each(|(i, (ws, out))| {
                problem.block_cycle_into(snapshot, &plan.block(i), subiterations, ws, out)
            })?;
    } else {
        for (i, (ws, out)) in workspaces.iter_mut().zip(owned.iter_mut()).enumerate() {
            problem.block_cycle_into(snapshot, &plan.block(i), subiterations, ws, out)?;
        }
    }
    for (i, owned) in owned.iter().enumerate() {
        scatter_owned(plan.shape(), &plan.block(i), owned, next);
    }
    Ok(())
}

/// One full cycle over all blocks: snapshot in, fresh global array out.
pub fn hier_cycle<P: BlockJacobi>(
    problem: &P,
    snapshot: &SolutionGrid,
    plan: &BlockPlan,
    subiterations: usize,
) -> Result<SolutionGrid> {
    problem.check_grid(snapshot)?;
    if plan.shape() != problem.shape() {
        return Err(SolverError::InvalidArgument(format!(
            "plan shape {:?} does not match problem shape {:?}",
            plan.shape(),
            problem.shape()
        )));
    }
    if subiterations == 0 {
        return Err(SolverError::InvalidArgument(
            "subiteration count must be at least 1".into(),
        ));
    }
    let mut workspaces: Vec<BlockWorkspace> =
        plan.blocks().map(|b| BlockWorkspace::for_block(&b)).collect();
    let mut owned: Vec<Vec<f64>> = vec![Vec::new(); plan.num_blocks()];
    let mut next = SolutionGrid::zeros(problem.shape());
    run_cycle_into(
        problem,
        snapshot,
        plan,
        subiterations,
        &mut workspaces,
        &mut owned,
        next.values_mut(),
    )?;
    Ok(next)
}
