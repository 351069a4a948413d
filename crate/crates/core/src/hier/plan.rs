//! Partitioning of the interior into halo-augmented, optionally
//! overlapping subdomains, plus the per-cycle resource model.
//!
//! Each direction is cut into blocks of `tpb` interior points whose starts
//! advance by `tpb - overlap`. When the spacing does not divide evenly the
//! final block is shifted back so its interior ends exactly at the domain
//! edge, which enlarges its overlap with the predecessor. Within every
//! overlap the left/lower block owns the left/lower half of the shared
//! points (taking the extra point when the overlap is odd), so the owned
//! ranges of all blocks tile the interior exactly.

use crate::error::{Result, SolverError};
use crate::grid::GridShape;
use crate::report::ResourceFigures;

/// Per-direction blocking parameters: interior points per block (the
/// threads-per-block of the GPU execution model this mirrors) and interior
/// overlap points shared with the neighboring block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AxisBlocking {
    pub tpb: usize,
    pub overlap: usize,
}

impl AxisBlocking {
    pub fn new(tpb: usize, overlap: usize) -> Self {
        AxisBlocking { tpb, overlap }
    }

    fn validate(&self) -> Result<()> {
        if self.tpb == 0 {
            return Err(SolverError::InvalidConfig("tpb must be at least 1".into()));
        }
        if !self.overlap.is_multiple_of(2) {
            return Err(SolverError::InvalidConfig(format!(
                "overlap must be even, got {}",
                self.overlap
            )));
        }
        if self.overlap >= self.tpb {
            return Err(SolverError::InvalidConfig(format!(
                "overlap ({}) must be less than tpb ({})",
                self.overlap, self.tpb
            )));
        }
        Ok(())
    }
}

/// Block geometry per dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Blocking {
    OneDim(AxisBlocking),
    TwoDim { x: AxisBlocking, y: AxisBlocking },
}

impl Blocking {
    pub fn dim(&self) -> usize {
        match self {
            Blocking::OneDim(_) => 1,
            Blocking::TwoDim { .. } => 2,
        }
    }

    /// True when every per-direction tpb is a multiple of the 32-thread
    /// warp width; purely informational at desk scale.
    pub fn warp_aligned(&self) -> bool {
        match self {
            Blocking::OneDim(a) => a.tpb % 32 == 0,
            Blocking::TwoDim { x, y } => x.tpb % 32 == 0 && y.tpb % 32 == 0,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Blocking::OneDim(a) => a.validate(),
            Blocking::TwoDim { x, y } => {
                x.validate()?;
                y.validate()
            }
        }
    }
}

/// Parameters of the hierarchical solver: block geometry, subiterations
/// per cycle, and the stopping rule.
#[derive(Debug, Clone)]
pub struct HierConfig {
    pub blocking: Blocking,
    /// Jacobi subiterations performed per block per cycle (k).
    pub subiterations: usize,
    pub tolerance_factor: f64,
    pub max_cycles: usize,
}

pub const DEFAULT_TOLERANCE_FACTOR: f64 = 1e-4;
pub const DEFAULT_MAX_CYCLES: usize = 1_000_000;

impl HierConfig {
    pub fn one_dim(tpb: usize, overlap: usize, subiterations: usize) -> Self {
        HierConfig {
            blocking: Blocking::OneDim(AxisBlocking::new(tpb, overlap)),
            subiterations,
            tolerance_factor: DEFAULT_TOLERANCE_FACTOR,
            max_cycles: DEFAULT_MAX_CYCLES,
        }
    }

    pub fn two_dim(
        tpb_x: usize,
        tpb_y: usize,
        overlap_x: usize,
        overlap_y: usize,
        subiterations: usize,
    ) -> Self {
        HierConfig {
            blocking: Blocking::TwoDim {
                x: AxisBlocking::new(tpb_x, overlap_x),
                y: AxisBlocking::new(tpb_y, overlap_y),
            },
            subiterations,
            tolerance_factor: DEFAULT_TOLERANCE_FACTOR,
            max_cycles: DEFAULT_MAX_CYCLES,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.blocking.validate()?;
        if self.subiterations == 0 {
            return Err(SolverError::InvalidConfig(
                "subiteration count must be at least 1".into(),
            ));
        }
        if !(self.tolerance_factor > 0.0 && self.tolerance_factor < 1.0) {
            return Err(SolverError::InvalidConfig(format!(
                "tolerance factor must lie in (0, 1), got {}",
                self.tolerance_factor
            )));
        }
        if self.max_cycles == 0 {
            return Err(SolverError::InvalidConfig(
                "max cycles must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// One block's extent along a single direction, in 0-based interior
/// coordinates. The halo-augmented range is `interior_start - 1 ..=
/// interior_start + interior_len`, with the implicit boundary ring
/// supplying zeros at the domain edges. The owned range is the sub-range
/// written back to the global array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AxisSpan {
    pub interior_start: usize,
    pub interior_len: usize,
    pub owned_start: usize,
    pub owned_len: usize,
}

impl AxisSpan {
    pub fn interior_end(&self) -> usize {
        self.interior_start + self.interior_len
    }

    pub fn owned_end(&self) -> usize {
        self.owned_start + self.owned_len
    }

    /// Halo-augmented extent (interior plus one point per side).
    pub fn halo_len(&self) -> usize {
        self.interior_len + 2
    }
}

/// Cuts one direction of length `n` into overlapping spans and assigns
/// ownership by the half-split rule.
pub fn partition_axis(n: usize, blocking: AxisBlocking) -> Result<Vec<AxisSpan>> {
    blocking.validate()?;
    let AxisBlocking { tpb, overlap } = blocking;
    if tpb > n {
        return Err(SolverError::InvalidConfig(format!(
            "tpb ({tpb}) exceeds the interior extent ({n})"
        )));
    }
    if n == tpb {
        return Ok(vec![AxisSpan {
            interior_start: 0,
            interior_len: tpb,
            owned_start: 0,
            owned_len: n,
        }]);
    }

    let stride = tpb - overlap;
    let num_blocks = 1 + (n - tpb).div_ceil(stride);
    let start = |b: usize| (b * stride).min(n - tpb);

    let mut spans = Vec::with_capacity(num_blocks);
    let mut owned_start = 0;
    for b in 0..num_blocks {
        let s = start(b);
        let owned_end = if b + 1 == num_blocks {
            n
        } else {
            // Overlap with the next block; the left block owns the left
            // half, rounding the odd point to the left.
            let shared = s + tpb - start(b + 1);
            start(b + 1) + shared.div_ceil(2)
        };
        spans.push(AxisSpan {
            interior_start: s,
            interior_len: tpb,
            owned_start,
            owned_len: owned_end - owned_start,
        });
        owned_start = owned_end;
    }
    Ok(spans)
}

/// The full partition of a grid's interior. 2D blocks are the cartesian
/// product of the per-axis spans, indexed row-major with x fastest.
#[derive(Debug, Clone)]
pub struct BlockPlan {
    shape: GridShape,
    x_spans: Vec<AxisSpan>,
    y_spans: Vec<AxisSpan>,
}

/// One block of a [`BlockPlan`]: its span along each direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockDescriptor {
    pub x: AxisSpan,
    pub y: Option<AxisSpan>,
}

impl BlockPlan {
    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn num_blocks(&self) -> usize {
        match self.shape {
            GridShape::OneDim { .. } => self.x_spans.len(),
            GridShape::TwoDim { .. } => self.x_spans.len() * self.y_spans.len(),
        }
    }

    pub fn block(&self, index: usize) -> BlockDescriptor {
        match self.shape {
            GridShape::OneDim { .. } => BlockDescriptor {
                x: self.x_spans[index],
                y: None,
            },
            GridShape::TwoDim { .. } => BlockDescriptor {
                x: self.x_spans[index % self.x_spans.len()],
                y: Some(self.y_spans[index / self.x_spans.len()]),
            },
        }
    }

    pub fn blocks(&self) -> impl Iterator<Item = BlockDescriptor> + '_ {
        (0..self.num_blocks()).map(|i| self.block(i))
    }

    pub fn x_spans(&self) -> &[AxisSpan] {
        &self.x_spans
    }

    pub fn y_spans(&self) -> &[AxisSpan] {
        &self.y_spans
    }
}

/// Builds the block partition for `shape` under `config`. The blocking
/// dimensionality must match the grid's.
pub fn make_block_plan(shape: GridShape, config: &HierConfig) -> Result<BlockPlan> {
    config.validate()?;
    match (shape, config.blocking) {
        (GridShape::OneDim { n }, Blocking::OneDim(a)) => Ok(BlockPlan {
            shape,
            x_spans: partition_axis(n, a)?,
            y_spans: Vec::new(),
        }),
        (GridShape::TwoDim { nx, ny }, Blocking::TwoDim { x, y }) => Ok(BlockPlan {
            shape,
            x_spans: partition_axis(nx, x)?,
            y_spans: partition_axis(ny, y)?,
        }),
        (shape, blocking) => Err(SolverError::InvalidConfig(format!(
            "blocking is {}D but the grid is {}D",
            blocking.dim(),
            shape.dim()
        ))),
    }
}

fn blocks_along(n: usize, blocking: AxisBlocking) -> Result<usize> {
    blocking.validate()?;
    if blocking.tpb > n {
        return Err(SolverError::InvalidConfig(format!(
            "tpb ({}) exceeds the interior extent ({n})",
            blocking.tpb
        )));
    }
    if n == blocking.tpb {
        Ok(1)
    } else {
        Ok(1 + (n - blocking.tpb).div_ceil(blocking.tpb - blocking.overlap))
    }
}

/// Evaluates the work-per-cycle model: `(N - o)/(tpb - o)` operational
/// blocks per direction (rounded up to the actual plan size when the
/// division is inexact), `blocks * tpb` operational threads, and the
/// double-buffered halo storage plus interior right-hand side per block at
/// 8 bytes per value.
pub fn resource_figures(shape: GridShape, config: &HierConfig) -> Result<ResourceFigures> {
    config.validate()?;
    match (shape, config.blocking) {
        (GridShape::OneDim { n }, Blocking::OneDim(a)) => {
            let blocks = blocks_along(n, a)?;
            Ok(ResourceFigures {
                operational_blocks: blocks,
                operational_threads: blocks * a.tpb,
                shared_bytes_per_block: 8 * (2 * (a.tpb + 2) + a.tpb),
            })
        }
        (GridShape::TwoDim { nx, ny }, Blocking::TwoDim { x, y }) => {
            let blocks = blocks_along(nx, x)? * blocks_along(ny, y)?;
            Ok(ResourceFigures {
                operational_blocks: blocks,
                operational_threads: blocks * x.tpb * y.tpb,
                shared_bytes_per_block: 8 * (2 * (x.tpb + 2) * (y.tpb + 2) + x.tpb * y.tpb),
            })
        }
        (shape, blocking) => Err(SolverError::InvalidConfig(format!(
            "blocking is {}D but the grid is {}D",
            blocking.dim(),
            shape.dim()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spans(n: usize, tpb: usize, o: usize) -> Vec<AxisSpan> {
        partition_axis(n, AxisBlocking::new(tpb, o)).unwrap()
    }

    fn assert_exact_cover(n: usize, spans: &[AxisSpan]) {
        let mut cover = vec![0u32; n];
        for s in spans {
            assert!(s.owned_start >= s.interior_start, "{s:?}");
            assert!(s.owned_end() <= s.interior_end(), "{s:?}");
            assert!(s.interior_end() <= n, "{s:?}");
            for c in &mut cover[s.owned_start..s.owned_end()] {
                *c += 1;
            }
        }
        assert!(
            cover.iter().all(|&c| c == 1),
            "owned ranges do not tile [0, {n}): {cover:?}"
        );
    }

    #[test]
    fn twelve_points_no_overlap() {
        let s = spans(12, 4, 0);
        assert_eq!(s.len(), 3);
        for (b, span) in s.iter().enumerate() {
            assert_eq!(span.interior_start, 4 * b);
            assert_eq!(span.interior_len, 4);
            assert_eq!(span.owned_start, 4 * b);
            assert_eq!(span.owned_len, 4);
        }
    }

    #[test]
    fn twelve_points_two_overlap() {
        // Interiors 0,2,4,6,8 (+4 each); owned [0,3) [3,5) [5,7) [7,9) [9,12).
        let s = spans(12, 4, 2);
        assert_eq!(s.len(), 5);
        let interiors: Vec<usize> = s.iter().map(|x| x.interior_start).collect();
        assert_eq!(interiors, vec![0, 2, 4, 6, 8]);
        let owned: Vec<(usize, usize)> = s.iter().map(|x| (x.owned_start, x.owned_end())).collect();
        assert_eq!(owned, vec![(0, 3), (3, 5), (5, 7), (7, 9), (9, 12)]);
        assert_exact_cover(12, &s);
    }

    #[test]
    fn single_block_owns_everything() {
        for o in [0, 2, 6] {
            let s = spans(8, 8, o);
            assert_eq!(s.len(), 1);
            assert_eq!(s[0].owned_start, 0);
            assert_eq!(s[0].owned_len, 8);
        }
    }

    #[test]
    fn inexact_tiling_shifts_last_block() {
        // N=10, tpb=4, o=0: starts 0,4,6; the irregular overlap [6,8)
        // splits evenly.
        let s = spans(10, 4, 0);
        let interiors: Vec<usize> = s.iter().map(|x| x.interior_start).collect();
        assert_eq!(interiors, vec![0, 4, 6]);
        let owned: Vec<(usize, usize)> = s.iter().map(|x| (x.owned_start, x.owned_end())).collect();
        assert_eq!(owned, vec![(0, 4), (4, 7), (7, 10)]);

        // N=9, tpb=4, o=0: irregular overlap [5,8) has odd length 3; the
        // predecessor takes the extra point.
        let s = spans(9, 4, 0);
        let interiors: Vec<usize> = s.iter().map(|x| x.interior_start).collect();
        assert_eq!(interiors, vec![0, 4, 5]);
        let owned: Vec<(usize, usize)> = s.iter().map(|x| (x.owned_start, x.owned_end())).collect();
        assert_eq!(owned, vec![(0, 4), (4, 7), (7, 9)]);
        assert_exact_cover(9, &s);
    }

    #[test]
    fn exhaustive_exact_cover_small() {
        for n in 1..=96 {
            for tpb in 1..=n {
                for o in (0..tpb).step_by(2) {
                    assert_exact_cover(n, &spans(n, tpb, o));
                }
            }
        }
    }

    #[test]
    fn invalid_configs_rejected() {
        assert!(partition_axis(8, AxisBlocking::new(16, 0)).is_err()); // tpb > n
        assert!(partition_axis(8, AxisBlocking::new(4, 3)).is_err()); // odd overlap
        assert!(partition_axis(8, AxisBlocking::new(4, 4)).is_err()); // overlap >= tpb
        assert!(partition_axis(8, AxisBlocking::new(0, 0)).is_err()); // zero tpb

        let cfg = HierConfig::one_dim(4, 0, 0); // k = 0
        assert!(cfg.validate().is_err());
        let mut cfg = HierConfig::one_dim(4, 0, 1);
        cfg.tolerance_factor = 1.5;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn plan_dimension_must_match_shape() {
        let cfg = HierConfig::one_dim(4, 0, 1);
        assert!(make_block_plan(GridShape::TwoDim { nx: 8, ny: 8 }, &cfg).is_err());
        let cfg2 = HierConfig::two_dim(4, 4, 0, 0, 1);
        assert!(make_block_plan(GridShape::OneDim { n: 8 }, &cfg2).is_err());
    }

    #[test]
    fn two_dim_plan_is_cartesian_product() {
        let cfg = HierConfig::two_dim(4, 4, 2, 0, 1);
        let plan = make_block_plan(GridShape::TwoDim { nx: 12, ny: 8 }, &cfg).unwrap();
        assert_eq!(plan.x_spans().len(), 5);
        assert_eq!(plan.y_spans().len(), 2);
        assert_eq!(plan.num_blocks(), 10);
        // x index advances fastest
        let b0 = plan.block(0);
        let b1 = plan.block(1);
        assert_eq!(b0.y, b1.y);
        assert_ne!(b0.x, b1.x);
        let b5 = plan.block(5);
        assert_eq!(b5.x, b0.x);
        assert_ne!(b5.y, b0.y);
    }

    #[test]
    fn resource_examples() {
        // 1D tpb=32: 8 * (2*34 + 32) = 800 bytes.
        let cfg = HierConfig::one_dim(32, 0, 1);
        let f = resource_figures(GridShape::OneDim { n: 1024 }, &cfg).unwrap();
        assert_eq!(f.shared_bytes_per_block, 800);
        assert_eq!(f.operational_blocks, 32);
        assert_eq!(f.operational_threads, 1024);

        // 2D tpb=32x32: 8 * (2*34*34 + 1024) = 26688 bytes.
        let cfg = HierConfig::two_dim(32, 32, 0, 0, 1);
        let f = resource_figures(GridShape::TwoDim { nx: 1024, ny: 1024 }, &cfg).unwrap();
        assert_eq!(f.shared_bytes_per_block, 26688);
        assert_eq!(f.operational_blocks, 1024);
        assert_eq!(f.operational_threads, 1024 * 1024);

        // overlap raises the block count: ((1024-16)/(32-16)) * 32 = 2016.
        let cfg = HierConfig::one_dim(32, 16, 1);
        let f = resource_figures(GridShape::OneDim { n: 1024 }, &cfg).unwrap();
        assert_eq!(f.operational_blocks, 63);
        assert_eq!(f.operational_threads, 2016);
    }

    #[test]
    fn block_count_matches_plan_length() {
        for n in [8usize, 12, 57, 100, 255] {
            for tpb in [2usize, 4, 7, 8] {
                if tpb > n {
                    continue;
                }
                for o in (0..tpb.min(7)).step_by(2) {
                    let cfg = HierConfig::one_dim(tpb, o, 1);
                    let plan = make_block_plan(GridShape::OneDim { n }, &cfg).unwrap();
                    let f = resource_figures(GridShape::OneDim { n }, &cfg).unwrap();
                    assert_eq!(f.operational_blocks, plan.num_blocks());
                }
            }
        }
    }

    #[test]
    fn warp_alignment_note() {
        assert!(HierConfig::one_dim(32, 0, 1).blocking.warp_aligned());
        assert!(!HierConfig::one_dim(24, 0, 1).blocking.warp_aligned());
        assert!(HierConfig::two_dim(32, 64, 0, 0, 1).blocking.warp_aligned());
        assert!(!HierConfig::two_dim(32, 8, 0, 0, 1).blocking.warp_aligned());
    }
}
