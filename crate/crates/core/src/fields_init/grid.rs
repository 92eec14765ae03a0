use crate::error::{Error, Result};

pub const MIN_CELLS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// `n` nodes; node `n` coincides with node `0`.
    Periodic,
    /// `n + 1` nodes including both ends; the state is constant beyond them.
    ConstantExtension,
}

/// Uniform grid of `n` cells on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub boundary: Boundary,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n: usize, boundary: Boundary) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::InvalidGrid(format!(
                "need finite x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n < MIN_CELLS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_CELLS} cells, got {n}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n,
            boundary,
        })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn node_count(&self) -> usize {
        match self.boundary {
            Boundary::Periodic => self.n,
            Boundary::ConstantExtension => self.n + 1,
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.node_count()).map(|i| self.x(i)).collect()
    }

    pub fn is_periodic(&self) -> bool {
        self.boundary == Boundary::Periodic
    }

    /// Same window and boundary with a different cell count.
    pub fn with_cells(&self, n: usize) -> Result<Self> {
        Self::new(self.x_min, self.x_max, n, self.boundary)
    }
}

/// Fourth-order first derivative on grid nodes.
///
/// Centered five-point stencil in the interior (wrapping when periodic),
/// one-sided five-point stencils at the two nodes nearest each end otherwise.
///
/// # Panics
/// If `values.len()` differs from the grid node count.
pub fn spatial_derivative(values: &[f64], grid: &Grid1D) -> Vec<f64> {
    let len = grid.node_count();
    assert_eq!(values.len(), len, "values must match grid nodes");
    let inv = 1.0 / (12.0 * grid.dx());
    let f = values;
    let mut out = vec![0.0; len];
    // Differences first, so a constant array gives exact zeros.
    let centred = |m2: f64, m1: f64, p1: f64, p2: f64| ((m2 - p2) + 8.0 * (p1 - m1)) * inv;
    let edge = |f0: f64, f1: f64, f2: f64, f3: f64, f4: f64| {
        (48.0 * (f1 - f0) - 36.0 * (f2 - f0) + 16.0 * (f3 - f0) - 3.0 * (f4 - f0)) * inv
    };
    let near_edge = |f0: f64, f1: f64, f2: f64, f3: f64, f4: f64| {
        (-3.0 * (f0 - f1) + 18.0 * (f2 - f1) - 6.0 * (f3 - f1) + (f4 - f1)) * inv
    };
    match grid.boundary {
        Boundary::Periodic => {
            for i in 0..len {
                let at = |k: isize| f[(i as isize + k).rem_euclid(len as isize) as usize];
                out[i] = centred(at(-2), at(-1), at(1), at(2));
            }
        }
        Boundary::ConstantExtension => {
            for i in 2..len - 2 {
                out[i] = centred(f[i - 2], f[i - 1], f[i + 1], f[i + 2]);
            }
            let e = len - 1;
            out[0] = edge(f[0], f[1], f[2], f[3], f[4]);
            out[1] = near_edge(f[0], f[1], f[2], f[3], f[4]);
            out[e] = -edge(f[e], f[e - 1], f[e - 2], f[e - 3], f[e - 4]);
            out[e - 1] = -near_edge(f[e], f[e - 1], f[e - 2], f[e - 3], f[e - 4]);
        }
    }
    out
}
