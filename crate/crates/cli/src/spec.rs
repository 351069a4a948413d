//! Experiment description shared by the three commands.

use crate::AppError;
use hier_jacobi::{build_poisson_1d, build_poisson_2d, StencilProblem1D, StencilProblem2D};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Classic,
    Hier,
}

/// A fully resolved experiment: problem size, solver mode, block geometry
/// and the parameter lists to explore. `solve` uses singleton lists.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub dim: u8,
    pub nx: usize,
    pub ny: usize,
    pub mode: Mode,
    pub tpb_x: usize,
    pub tpb_y: usize,
    pub k_list: Vec<usize>,
    pub overlap_list: Vec<usize>,
    /// y-direction overlap override; `overlap_list` applies to x (and to y
    /// when this is `None`).
    pub overlap_y: Option<usize>,
    pub tolerance_factor: f64,
    pub max_cycles: usize,
    pub out: Option<std::path::PathBuf>,
    /// Reserved for future randomized right-hand sides; currently unused.
    pub seed: Option<u64>,
}

pub(crate) enum BuiltProblem {
    OneDim(StencilProblem1D),
    TwoDim(StencilProblem2D),
}

impl ExperimentSpec {
    pub(crate) fn validate(&self, needs_blocks: bool) -> Result<(), AppError> {
        let usage = |msg: String| Err(AppError::Usage(msg));
        if self.dim != 1 && self.dim != 2 {
            return usage(format!("--dim must be 1 or 2, got {}", self.dim));
        }
        if self.nx == 0 {
            return usage("--n must be at least 1".into());
        }
        if self.dim == 2 && self.ny == 0 {
            return usage("--ny must be at least 1".into());
        }
        if !(self.tolerance_factor > 0.0 && self.tolerance_factor < 1.0) {
            return usage(format!(
                "--tol-factor must lie strictly between 0 and 1, got {}",
                self.tolerance_factor
            ));
        }
        if self.max_cycles == 0 {
            return usage("--max-cycles must be at least 1".into());
        }
        if self.k_list.is_empty() {
            return usage("at least one --subiterations value is required".into());
        }
        if let Some(k) = self.k_list.iter().find(|&&k| k == 0) {
            return usage(format!("--subiterations values must be at least 1, got {k}"));
        }
        if self.overlap_list.is_empty() {
            return usage("at least one --overlap value is required".into());
        }

        if needs_blocks {
            self.validate_axis("--tpb", "--n", self.tpb_x, self.nx)?;
            for &o in &self.overlap_list {
                self.validate_overlap("--overlap", o, self.tpb_x)?;
            }
            if self.dim == 2 {
                self.validate_axis("--tpb-y", "--ny", self.tpb_y, self.ny)?;
                match self.overlap_y {
                    Some(oy) => self.validate_overlap("--overlap-y", oy, self.tpb_y)?,
                    None => {
                        for &o in &self.overlap_list {
                            self.validate_overlap("--overlap", o, self.tpb_y)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn validate_axis(&self, flag: &str, n_flag: &str, tpb: usize, n: usize) -> Result<(), AppError> {
        if tpb == 0 {
            return Err(AppError::Usage(format!("{flag} must be at least 1")));
        }
        if tpb > n {
            return Err(AppError::Usage(format!(
                "{flag} ({tpb}) must not exceed {n_flag} ({n})"
            )));
        }
        Ok(())
    }

    fn validate_overlap(&self, flag: &str, overlap: usize, tpb: usize) -> Result<(), AppError> {
        if !overlap.is_multiple_of(2) {
            return Err(AppError::Usage(format!(
                "{flag} values must be even, got {overlap}"
            )));
        }
        if overlap >= tpb {
            return Err(AppError::Usage(format!(
                "{flag} ({overlap}) must be less than the subdomain width ({tpb})"
            )));
        }
        Ok(())
    }

    pub(crate) fn build_problem(&self) -> Result<BuiltProblem, AppError> {
        Ok(match self.dim {
            1 => BuiltProblem::OneDim(build_poisson_1d(self.nx)?),
            _ => BuiltProblem::TwoDim(build_poisson_2d(self.nx, self.ny)?),
        })
    }

    pub(crate) fn hier_config(&self, k: usize, overlap: usize) -> hier_jacobi::HierConfig {
        let mut cfg = match self.dim {
            1 => hier_jacobi::HierConfig::one_dim(self.tpb_x, overlap, k),
            _ => hier_jacobi::HierConfig::two_dim(
                self.tpb_x,
                self.tpb_y,
                overlap,
                self.overlap_y.unwrap_or(overlap),
                k,
            ),
        };
        cfg.tolerance_factor = self.tolerance_factor;
        cfg.max_cycles = self.max_cycles;
        cfg
    }
}
