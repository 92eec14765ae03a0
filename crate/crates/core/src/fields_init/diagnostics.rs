use std::ops::Range;

use super::{FieldSnapshot, Grid1D};
use crate::error::{Error, Result};
use crate::gas_thermo::{entropy_curvature, GasModel};

/// Entropy-derived quantities over a window of grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyDiagnostics {
    pub alpha: f64,
    pub beta: f64,
    pub nodes: Range<usize>,
    /// `S_xx − S_x²/(c_v(3γ−1))` on the window nodes.
    pub b: Vec<f64>,
    /// `max |m m_xx − ((3γ+1)/(3γ−1)) m_x²|`.
    pub m3: f64,
    /// Total variation of `S/(2c_v)` (trapezoid rule).
    pub v: f64,
    pub m_l: f64,
    pub m_u: f64,
    /// `max |s|`.
    pub m_s: f64,
    /// `max |r|`.
    pub m_r: f64,
}

/// Node indices with `x ∈ [alpha, beta]`.
pub fn window_indices(grid: &Grid1D, alpha: f64, beta: f64) -> Range<usize> {
    let dx = grid.dx();
    let tol = 1e-9 * dx;
    let last = grid.node_count() - 1;
    let lo = ((alpha - grid.x_min - tol) / dx).ceil().max(0.0) as usize;
    let hi = ((beta - grid.x_min + tol) / dx).floor();
    if hi < 0.0 || lo > last {
        return 0..0;
    }
    let hi = (hi as usize).min(last);
    if lo > hi {
        0..0
    } else {
        lo..hi + 1
    }
}

/// `window = None` covers the whole grid (closing the loop when periodic).
pub fn entropy_diagnostics(
    gas: &GasModel,
    snapshot: &FieldSnapshot,
    window: Option<(f64, f64)>,
) -> Result<EntropyDiagnostics> {
    let grid = &snapshot.grid;
    let (alpha, beta, nodes) = match window {
        None => (
            grid.x_min,
            grid.x(grid.node_count() - 1),
            0..grid.node_count(),
        ),
        Some((a, b)) => {
            let idx = window_indices(grid, a, b);
            if !(a < b) || idx.len() < 2 {
                return Err(Error::DegenerateWindow {
                    alpha: a,
                    beta: b,
                    reason: "window must contain at least two grid nodes",
                });
            }
            (a, b, idx)
        }
    };
    let ent = &snapshot.entropy;
    let g = gas.gamma();
    let c_v = gas.c_v();
    let mut b = Vec::with_capacity(nodes.len());
    let mut m3 = 0.0f64;
    let mut m_l = f64::INFINITY;
    let mut m_u = 0.0f64;
    let mut m_s = 0.0f64;
    let mut m_r = 0.0f64;
    for i in nodes.clone() {
        b.push(ent.s_xx[i] - ent.s_x[i].powi(2) / (c_v * (3.0 * g - 1.0)));
        m3 = m3.max(entropy_curvature(g, ent.m[i], ent.m_x[i], ent.m_xx[i]).abs());
        m_l = m_l.min(ent.m[i]);
        m_u = m_u.max(ent.m[i]);
        m_s = m_s.max(snapshot.s[i].abs());
        m_r = m_r.max(snapshot.r[i].abs());
    }
    let dens: Vec<f64> = nodes
        .clone()
        .map(|i| ent.s_x[i].abs() / (2.0 * c_v))
        .collect();
    let mut v: f64 = dens.windows(2).map(|w| 0.5 * (w[0] + w[1])).sum::<f64>() * grid.dx();
    if window.is_none() && grid.is_periodic() {
        v += 0.5 * (dens[0] + dens[dens.len() - 1]) * grid.dx();
    }
    Ok(EntropyDiagnostics {
        alpha,
        beta,
        nodes,
        b,
        m3,
        v,
        m_l,
        m_u,
        m_s,
        m_r,
    })
}
