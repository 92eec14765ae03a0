//! Piecewise-cubic Hermite interpolation with monotone slopes.
//!
//! On uniform grids the node slope is the centred parabolic slope limited
//! by twice the smaller adjacent secant (Steffen's rule); it vanishes at
//! local extrema of the data, so no cell overshoots its end values. The
//! scattered-data interpolant uses the weighted harmonic mean (PCHIP).

use crate::fields_init::{Boundary, Grid1D};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    Linear,
    #[default]
    MonotoneCubic,
}

/// Interpolant over the nodes of a uniform grid.
#[derive(Debug, Clone)]
pub struct GridInterpolant<'a> {
    grid: Grid1D,
    values: &'a [f64],
    /// Slopes scaled by Δx (per-cell units); empty for linear.
    slopes: Vec<f64>,
}

/// One evaluation; `outside` marks a point beyond a non-periodic window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub value: f64,
    pub outside: bool,
}

impl<'a> GridInterpolant<'a> {
    pub fn new(grid: &Grid1D, values: &'a [f64], kind: Interpolation) -> Self {
        assert_eq!(
            values.len(),
            grid.node_count(),
            "values must match grid nodes"
        );
        let slopes = match kind {
            Interpolation::Linear => Vec::new(),
            Interpolation::MonotoneCubic => uniform_slopes(values, grid.boundary),
        };
        Self {
            grid: *grid,
            values,
            slopes,
        }
    }

    pub fn eval(&self, x: f64) -> Sample {
        match locate(&self.grid, x) {
            Located::Edge { index, outside } => Sample {
                value: self.values[index],
                outside,
            },
            Located::Cell { j, j1, theta } => {
                let (f0, f1) = (self.values[j], self.values[j1]);
                let value = if self.slopes.is_empty() {
                    f0 + theta * (f1 - f0)
                } else {
                    hermite(f0, f1, self.slopes[j], self.slopes[j1], theta)
                };
                Sample {
                    value,
                    outside: false,
                }
            }
        }
    }
}

enum Located {
    Edge { index: usize, outside: bool },
    Cell { j: usize, j1: usize, theta: f64 },
}

fn locate(g: &Grid1D, x: f64) -> Located {
    let n = g.n;
    let mut u = (x - g.x_min) / g.dx();
    match g.boundary {
        Boundary::Periodic => u = u.rem_euclid(n as f64),
        Boundary::ConstantExtension => {
            if u <= 0.0 {
                return Located::Edge {
                    index: 0,
                    outside: u < 0.0,
                };
            }
            if u >= n as f64 {
                return Located::Edge {
                    index: n,
                    outside: u > n as f64,
                };
            }
        }
    }
    let j = (u.floor() as usize).min(n - 1);
    let j1 = match g.boundary {
        Boundary::Periodic => (j + 1) % n,
        Boundary::ConstantExtension => j + 1,
    };
    Located::Cell {
        j,
        j1,
        theta: u - j as f64,
    }
}

#[inline]
fn hermite(f0: f64, f1: f64, d0: f64, d1: f64, t: f64) -> f64 {
    let s = 1.0 - t;
    let h10 = t * s * s;
    let h01 = t * t * (3.0 - 2.0 * t);
    let h11 = t * t * (t - 1.0);
    // h00 = 1 − h01; this form is exact on flat cells.
    f0 + h01 * (f1 - f0) + h10 * d0 + h11 * d1
}

#[inline]
fn steffen(d_left: f64, d_right: f64) -> f64 {
    if d_left * d_right <= 0.0 {
        0.0
    } else {
        let p = 0.5 * (d_left + d_right);
        p.signum() * d_left.abs().min(d_right.abs()).min(0.5 * p.abs()) * 2.0
    }
}

/// Three-point end slope limited to keep the end cell monotone.
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

/// Per-cell slope at node `i` of uniform data.
fn slope_at(f: &[f64], i: usize, boundary: Boundary) -> f64 {
    let len = f.len();
    match boundary {
        Boundary::Periodic => {
            let prev = f[(i + len - 1) % len];
            let next = f[(i + 1) % len];
            steffen(f[i] - prev, next - f[i])
        }
        Boundary::ConstantExtension => {
            if i == 0 {
                end_slope(1.0, 1.0, f[1] - f[0], f[2] - f[1])
            } else if i == len - 1 {
                end_slope(1.0, 1.0, f[len - 1] - f[len - 2], f[len - 2] - f[len - 3])
            } else {
                steffen(f[i] - f[i - 1], f[i + 1] - f[i])
            }
        }
    }
}

fn uniform_slopes(f: &[f64], boundary: Boundary) -> Vec<f64> {
    (0..f.len()).map(|i| slope_at(f, i, boundary)).collect()
}

/// Single-point evaluation that computes only the two slopes it needs.
/// Agrees exactly with [`GridInterpolant::eval`].
pub fn eval_at(grid: &Grid1D, values: &[f64], x: f64, kind: Interpolation) -> Sample {
    match locate(grid, x) {
        Located::Edge { index, outside } => Sample {
            value: values[index],
            outside,
        },
        Located::Cell { j, j1, theta } => {
            let (f0, f1) = (values[j], values[j1]);
            let value = match kind {
                Interpolation::Linear => f0 + theta * (f1 - f0),
                Interpolation::MonotoneCubic => hermite(
                    f0,
                    f1,
                    slope_at(values, j, grid.boundary),
                    slope_at(values, j1, grid.boundary),
                    theta,
                ),
            };
            Sample {
                value,
                outside: false,
            }
        }
    }
}

/// Monotone cubic through scattered, strictly increasing abscissae.
/// Evaluation outside the data range returns the nearest end value.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl MonotoneCubic {
    /// Returns `None` unless there are at least three strictly increasing abscissae.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Option<Self> {
        if xs.len() < 3 || xs.len() != ys.len() || xs.windows(2).any(|w| !(w[1] > w[0])) {
            return None;
        }
        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let del: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
        let mut ds = vec![0.0; n];
        for i in 1..n - 1 {
            if del[i - 1] * del[i] > 0.0 {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                ds[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
            }
        }
        ds[0] = end_slope(h[0], h[1], del[0], del[1]);
        ds[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
        Some(Self { xs, ys, ds })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let j = self.xs.partition_point(|&v| v <= x) - 1;
        let h = self.xs[j + 1] - self.xs[j];
        let t = (x - self.xs[j]) / h;
        hermite(
            self.ys[j],
            self.ys[j + 1],
            self.ds[j] * h,
            self.ds[j + 1] * h,
            t,
        )
    }
}
