//! Property tests: stencil application against dense matrix-vector
//! products, fixed points of the elemental updates, exact-cover
//! partitioning, halo locality and scheduling determinism.

use hier_jacobi::{
    build_poisson_1d, build_poisson_2d, classic_sweep, hier_solve, make_block_plan, oracle,
    residual_norm, run_block_cycle, Coeffs2D, GridShape, HierConfig, Problem, SolutionGrid,
    StencilProblem1D, StencilProblem2D,
};
use proptest::prelude::*;

fn dense_matvec_1d(p: &StencilProblem1D, x: &[f64]) -> Vec<f64> {
    let n = p.n_interior();
    let mut out = vec![0.0; n];
    for i in 0..n {
        let mut acc = p.diag()[i] * x[i];
        if i > 0 {
            acc += p.sub()[i] * x[i - 1];
        }
        if i + 1 < n {
            acc += p.sup()[i] * x[i + 1];
        }
        out[i] = acc;
    }
    out
}

fn dense_matvec_2d(p: &StencilProblem2D, x: &[f64]) -> Vec<f64> {
    let (nx, ny) = (p.nx(), p.ny());
    let c = p.coeffs();
    let mut out = vec![0.0; nx * ny];
    for iy in 0..ny {
        for ix in 0..nx {
            let i = iy * nx + ix;
            let mut acc = c.center * x[i];
            if ix > 0 {
                acc += c.west * x[i - 1];
            }
            if ix + 1 < nx {
                acc += c.east * x[i + 1];
            }
            if iy > 0 {
                acc += c.south * x[i - nx];
            }
            if iy + 1 < ny {
                acc += c.north * x[i + nx];
            }
            out[i] = acc;
        }
    }
    out
}

fn nonzero_coeff() -> impl Strategy<Value = f64> {
    (0.5f64..3.0, prop::bool::ANY).prop_map(|(m, neg)| if neg { -m } else { m })
}

fn problem_1d() -> impl Strategy<Value = (StencilProblem1D, Vec<f64>)> {
    (1usize..48).prop_flat_map(|n| {
        (
            prop::collection::vec(-2.0f64..2.0, n),
            prop::collection::vec(nonzero_coeff(), n),
            prop::collection::vec(-2.0f64..2.0, n),
            prop::collection::vec(-5.0f64..5.0, n),
            prop::collection::vec(-5.0f64..5.0, n),
        )
            .prop_map(move |(sub, diag, sup, rhs, x)| {
                (StencilProblem1D::new(0.5, sub, diag, sup, rhs).unwrap(), x)
            })
    })
}

fn problem_2d() -> impl Strategy<Value = (StencilProblem2D, Vec<f64>)> {
    (1usize..10, 1usize..10).prop_flat_map(|(nx, ny)| {
        (
            prop::collection::vec(-2.0f64..2.0, 4),
            nonzero_coeff(),
            prop::collection::vec(-5.0f64..5.0, nx * ny),
            prop::collection::vec(-5.0f64..5.0, nx * ny),
        )
            .prop_map(move |(off, center, rhs, x)| {
                let coeffs = Coeffs2D {
                    west: off[0],
                    east: off[1],
                    south: off[2],
                    north: off[3],
                    center,
                };
                (
                    StencilProblem2D::new(nx, ny, 0.25, 0.5, coeffs, rhs).unwrap(),
                    x,
                )
            })
    })
}

proptest! {
    #[test]
    fn stencil_apply_matches_dense_matvec_1d((p, x) in problem_1d()) {
        let grid = SolutionGrid::from_values(p.shape(), x.clone()).unwrap();
        let mut out = vec![0.0; p.n_interior()];
        p.apply_into(&grid, &mut out).unwrap();
        let dense = dense_matvec_1d(&p, &x);
        let scale = dense.iter().map(|v| v.abs()).fold(1.0f64, f64::max);
        for (a, b) in out.iter().zip(&dense) {
            prop_assert!((a - b).abs() <= 1e-12 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn stencil_apply_matches_dense_matvec_2d((p, x) in problem_2d()) {
        let grid = SolutionGrid::from_values(p.shape(), x.clone()).unwrap();
        let mut out = vec![0.0; p.nx() * p.ny()];
        p.apply_into(&grid, &mut out).unwrap();
        let dense = dense_matvec_2d(&p, &x);
        let scale = dense.iter().map(|v| v.abs()).fold(1.0f64, f64::max);
        for (a, b) in out.iter().zip(&dense) {
            prop_assert!((a - b).abs() <= 1e-12 * scale, "{a} vs {b}");
        }
    }

    #[test]
    fn owned_ranges_tile_the_interior_1d(
        n in 1usize..300,
        tpb_frac in 0.0f64..1.0,
        o_frac in 0.0f64..1.0,
    ) {
        let tpb = 1 + ((n - 1) as f64 * tpb_frac) as usize;
        let max_even = (tpb - 1) / 2 * 2;
        let o = ((max_even as f64 * o_frac) as usize) / 2 * 2;
        let cfg = HierConfig::one_dim(tpb, o, 1);
        let plan = make_block_plan(GridShape::OneDim { n }, &cfg).unwrap();
        let mut cover = vec![0u32; n];
        for b in plan.blocks() {
            prop_assert!(b.x.owned_start >= b.x.interior_start);
            prop_assert!(b.x.owned_end() <= b.x.interior_end());
            for c in &mut cover[b.x.owned_start..b.x.owned_end()] {
                *c += 1;
            }
        }
        prop_assert!(cover.iter().all(|&c| c == 1));
    }

    #[test]
    fn owned_ranges_tile_the_interior_2d(
        nx in 1usize..40,
        ny in 1usize..40,
        fx in 0.0f64..1.0,
        fy in 0.0f64..1.0,
        ox_frac in 0.0f64..1.0,
        oy_frac in 0.0f64..1.0,
    ) {
        let tpb_x = 1 + ((nx - 1) as f64 * fx) as usize;
        let tpb_y = 1 + ((ny - 1) as f64 * fy) as usize;
        let ox = (((tpb_x - 1) / 2 * 2) as f64 * ox_frac) as usize / 2 * 2;
        let oy = (((tpb_y - 1) / 2 * 2) as f64 * oy_frac) as usize / 2 * 2;
        let cfg = HierConfig::two_dim(tpb_x, tpb_y, ox, oy, 1);
        let plan = make_block_plan(GridShape::TwoDim { nx, ny }, &cfg).unwrap();
        let mut cover = vec![0u32; nx * ny];
        for b in plan.blocks() {
            let sy = b.y.unwrap();
            for gy in sy.owned_start..sy.owned_end() {
                for gx in b.x.owned_start..b.x.owned_end() {
                    cover[gy * nx + gx] += 1;
                }
            }
        }
        prop_assert!(cover.iter().all(|&c| c == 1), "cover={cover:?}");
    }

    #[test]
    fn direct_solution_is_a_sweep_fixed_point_1d(n in 1usize..64) {
        let p = build_poisson_1d(n).unwrap();
        let x = oracle::direct_solve_1d(&p).unwrap();
        let mut next = SolutionGrid::zeros(p.shape());
        classic_sweep(&p, &x, &mut next).unwrap();
        let scale = x.values().iter().map(|v| v.abs()).fold(f64::MIN_POSITIVE, f64::max);
        for (a, b) in next.values().iter().zip(x.values()) {
            prop_assert!((a - b).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn direct_solution_is_a_sweep_fixed_point_2d(nx in 1usize..14, ny in 1usize..14) {
        let p = build_poisson_2d(nx, ny).unwrap();
        let x = oracle::direct_solve_2d(&p).unwrap();
        let mut next = SolutionGrid::zeros(p.shape());
        classic_sweep(&p, &x, &mut next).unwrap();
        let scale = x.values().iter().map(|v| v.abs()).fold(f64::MIN_POSITIVE, f64::max);
        for (a, b) in next.values().iter().zip(x.values()) {
            prop_assert!((a - b).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn block_output_ignores_dofs_outside_its_halo(
        seed in 0u64..1_000_000,
        block_pick in 0usize..1000,
        dof_pick in 0usize..1000,
    ) {
        let n = 96;
        let p = build_poisson_1d(n).unwrap();
        let values: Vec<f64> = (0..n)
            .map(|i| (((seed as usize + i) * 2654435761) % 4096) as f64 / 4096.0)
            .collect();
        let snapshot = SolutionGrid::from_values(p.shape(), values.clone()).unwrap();
        let cfg = HierConfig::one_dim(16, 4, 6);
        let plan = make_block_plan(p.shape(), &cfg).unwrap();
        let block = plan.block(block_pick % plan.num_blocks());

        let halo_lo = block.x.interior_start.saturating_sub(1);
        let halo_hi = (block.x.interior_end() + 1).min(n);
        let outside: Vec<usize> = (0..n).filter(|&i| i < halo_lo || i >= halo_hi).collect();
        prop_assume!(!outside.is_empty());
        let dof = outside[dof_pick % outside.len()];

        let before = run_block_cycle(&p, &snapshot, &block, 6).unwrap();
        let mut perturbed = values;
        perturbed[dof] += 1234.5;
        let snapshot2 = SolutionGrid::from_values(p.shape(), perturbed).unwrap();
        let after = run_block_cycle(&p, &snapshot2, &block, 6).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn hier_solution_residual_meets_tolerance(
        n in 16usize..96,
        tpb in 4usize..16,
        k in 1usize..12,
    ) {
        prop_assume!(tpb <= n);
        let p = build_poisson_1d(n).unwrap();
        let cfg = HierConfig::one_dim(tpb, 2.min(tpb - 1) / 2 * 2, k);
        let res = hier_solve(&p, &SolutionGrid::ones(p.shape()), &cfg).unwrap();
        prop_assert!(res.report.converged);
        let r = residual_norm(&p, &res.solution).unwrap();
        prop_assert!(r <= cfg.tolerance_factor * res.report.initial_residual);
        prop_assert_eq!(r, res.report.final_residual());
    }
}
