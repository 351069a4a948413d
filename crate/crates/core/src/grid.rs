//! Solution storage with an implicit homogeneous Dirichlet boundary ring.

use crate::error::{Result, SolverError};

/// Interior extents of a structured grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridShape {
    OneDim { n: usize },
    TwoDim { nx: usize, ny: usize },
}

impl GridShape {
    pub fn dim(&self) -> usize {
        match self {
            GridShape::OneDim { .. } => 1,
            GridShape::TwoDim { .. } => 2,
        }
    }

    /// Total number of interior DOFs.
    pub fn num_dofs(&self) -> usize {
        match *self {
            GridShape::OneDim { n } => n,
            GridShape::TwoDim { nx, ny } => nx * ny,
        }
    }
}

/// Interior DOF values of a structured grid. Everything one step outside
/// the interior is a Dirichlet boundary fixed at zero; reads there return
/// exactly `0.0` and are never stored.
///
/// 2D values are row-major with x fastest: `values[iy * nx + ix]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionGrid {
    shape: GridShape,
    values: Vec<f64>,
}

impl SolutionGrid {
    pub fn zeros(shape: GridShape) -> Self {
        Self::constant(shape, 0.0)
    }

    pub fn ones(shape: GridShape) -> Self {
        Self::constant(shape, 1.0)
    }

    pub fn constant(shape: GridShape, value: f64) -> Self {
        SolutionGrid {
            shape,
            values: vec![value; shape.num_dofs()],
        }
    }

    pub fn from_values(shape: GridShape, values: Vec<f64>) -> Result<Self> {
        if values.len() != shape.num_dofs() {
            return Err(SolverError::InvalidArgument(format!(
                "value vector length {} does not match shape ({} DOFs)",
                values.len(),
                shape.num_dofs()
            )));
        }
        Ok(SolutionGrid { shape, values })
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// 1D read honoring the boundary ring: indices `-1` and `n` return 0.
    pub fn at_1d(&self, i: isize) -> f64 {
        let GridShape::OneDim { n } = self.shape else {
            panic!("at_1d called on a 2D grid");
        };
        if i < 0 || i as usize >= n {
            0.0
        } else {
            self.values[i as usize]
        }
    }

    /// 2D read honoring the boundary ring around the interior rectangle.
    pub fn at_2d(&self, ix: isize, iy: isize) -> f64 {
        let GridShape::TwoDim { nx, ny } = self.shape else {
            panic!("at_2d called on a 1D grid");
        };
        if ix < 0 || iy < 0 || ix as usize >= nx || iy as usize >= ny {
            0.0
        } else {
            self.values[iy as usize * nx + ix as usize]
        }
    }
}
