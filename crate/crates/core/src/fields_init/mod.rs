//! Grids, gridded states and initial data.
//!
//! A [`FieldSnapshot`] stores `τ, u` and every derived field on the nodes of a
//! [`Grid1D`]. The entropy and its derivatives live in a shared
//! [`EntropyProfile`] that is built once and never changes during a run.

mod budget;
mod diagnostics;
mod families;
mod grid;
mod profiles;

use std::sync::Arc;

pub use budget::{
    classify_initial, gradient_budget, Classification, CompressiveNode, GradientBudget,
};
pub use diagnostics::{entropy_diagnostics, window_indices, EntropyDiagnostics};
pub use families::{critical_family, stationary_solution, CriticalFamily};
pub use grid::{spatial_derivative, Boundary, Grid1D, MIN_CELLS};
pub use profiles::Profile;

use crate::error::{Error, Result};
use crate::gas_thermo::GasModel;

/// Entropy `S(x)` with the factor `m = e^{S/(2c_v)}` and its first two derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyProfile {
    pub entropy: Vec<f64>,
    pub s_x: Vec<f64>,
    pub s_xx: Vec<f64>,
    pub m: Vec<f64>,
    pub m_x: Vec<f64>,
    pub m_xx: Vec<f64>,
}

impl EntropyProfile {
    /// Derivatives of `S` by two passes of [`spatial_derivative`].
    pub fn new(gas: &GasModel, grid: &Grid1D, entropy: Vec<f64>) -> Result<Self> {
        check_len(grid, entropy.len())?;
        let s_x = spatial_derivative(&entropy, grid);
        let s_xx = spatial_derivative(&s_x, grid);
        let two_cv = 2.0 * gas.c_v();
        let m: Vec<f64> = entropy.iter().map(|&s| gas.m_from_entropy(s)).collect();
        let m_x = m.iter().zip(&s_x).map(|(m, sx)| m * sx / two_cv).collect();
        let m_xx = m
            .iter()
            .zip(s_x.iter().zip(&s_xx))
            .map(|(m, (sx, sxx))| m * (sxx / two_cv + (sx / two_cv).powi(2)))
            .collect();
        Ok(Self {
            entropy,
            s_x,
            s_xx,
            m,
            m_x,
            m_xx,
        })
    }

    pub fn isentropic(gas: &GasModel, grid: &Grid1D) -> Self {
        Self::new(gas, grid, vec![0.0; grid.node_count()]).expect("length matches grid")
    }

    pub fn is_constant(&self) -> bool {
        self.entropy.iter().all(|&s| s == self.entropy[0])
    }
}

/// Gridded state at time `t`.
#[derive(Debug, Clone)]
pub struct FieldSnapshot {
    pub t: f64,
    pub grid: Grid1D,
    pub entropy: Arc<EntropyProfile>,
    pub tau: Vec<f64>,
    pub u: Vec<f64>,
    pub eta: Vec<f64>,
    pub c: Vec<f64>,
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    pub r_x: Vec<f64>,
    pub s_x: Vec<f64>,
    pub y: Vec<f64>,
    pub q: Vec<f64>,
}

/// Quantities measured while sampling initial data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialReport {
    /// Grid estimate of `‖(τ₀, u₀)‖_{C¹} + ‖S₀‖_{C²}` (sum of sup norms).
    pub m1: f64,
    /// `min τ₀`.
    pub m2: f64,
}

impl FieldSnapshot {
    pub fn from_primitive(
        gas: &GasModel,
        grid: &Grid1D,
        t: f64,
        tau: Vec<f64>,
        u: Vec<f64>,
        entropy: Arc<EntropyProfile>,
    ) -> Result<Self> {
        check_len(grid, tau.len())?;
        check_len(grid, u.len())?;
        check_len(grid, entropy.m.len())?;
        let len = tau.len();
        let mut eta = Vec::with_capacity(len);
        for &tv in &tau {
            eta.push(gas.eta_from_tau(tv)?);
        }
        let m = &entropy.m;
        let r = (0..len).map(|i| u[i] - m[i] * eta[i]).collect();
        let s = (0..len).map(|i| u[i] + m[i] * eta[i]).collect();
        Ok(Self::assemble(gas, grid, t, entropy, tau, u, eta, r, s))
    }

    pub fn from_riemann(
        gas: &GasModel,
        grid: &Grid1D,
        t: f64,
        r: Vec<f64>,
        s: Vec<f64>,
        entropy: Arc<EntropyProfile>,
    ) -> Result<Self> {
        check_len(grid, r.len())?;
        check_len(grid, s.len())?;
        let len = r.len();
        let mut tau = Vec::with_capacity(len);
        let mut u = Vec::with_capacity(len);
        let mut eta = Vec::with_capacity(len);
        for i in 0..len {
            let (tv, uv) = gas.primitive_from_riemann(r[i], s[i], entropy.m[i])?;
            tau.push(tv);
            u.push(uv);
            eta.push((s[i] - r[i]) / (2.0 * entropy.m[i]));
        }
        Ok(Self::assemble(gas, grid, t, entropy, tau, u, eta, r, s))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        gas: &GasModel,
        grid: &Grid1D,
        t: f64,
        entropy: Arc<EntropyProfile>,
        tau: Vec<f64>,
        u: Vec<f64>,
        eta: Vec<f64>,
        r: Vec<f64>,
        s: Vec<f64>,
    ) -> Self {
        let len = tau.len();
        let c = (0..len)
            .map(|i| gas.sound_speed_from_eta(eta[i], entropy.m[i]))
            .collect();
        let r_x = spatial_derivative(&r, grid);
        let s_x = spatial_derivative(&s, grid);
        let mut y = Vec::with_capacity(len);
        let mut q = Vec::with_capacity(len);
        for i in 0..len {
            let (yi, qi) = gas.gradient_vars(eta[i], entropy.m[i], entropy.m_x[i], s_x[i], r_x[i]);
            y.push(yi);
            q.push(qi);
        }
        Self {
            t,
            grid: *grid,
            entropy,
            tau,
            u,
            eta,
            c,
            r,
            s,
            r_x,
            s_x,
            y,
            q,
        }
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn m(&self) -> &[f64] {
        &self.entropy.m
    }

    pub fn entropy_values(&self) -> &[f64] {
        &self.entropy.entropy
    }

    pub fn nodes(&self) -> Vec<f64> {
        self.grid.nodes()
    }
}

/// Sample `τ₀, u₀, S₀` on the grid nodes.
pub fn sample_initial(
    gas: &GasModel,
    grid: &Grid1D,
    tau0: &dyn Fn(f64) -> f64,
    u0: &dyn Fn(f64) -> f64,
    s0: &dyn Fn(f64) -> f64,
) -> Result<(FieldSnapshot, InitialReport)> {
    let xs = grid.nodes();
    let tau: Vec<f64> = xs.iter().map(|&x| tau0(x)).collect();
    for (x, t) in xs.iter().zip(&tau) {
        if !(*t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidInitialData {
                x: *x,
                reason: format!("tau0 = {t} is not positive"),
            });
        }
    }
    let u: Vec<f64> = xs.iter().map(|&x| u0(x)).collect();
    let entropy: Vec<f64> = xs.iter().map(|&x| s0(x)).collect();
    for (x, v) in xs.iter().zip(u.iter().chain(&entropy)) {
        if !v.is_finite() {
            return Err(Error::InvalidInitialData {
                x: *x,
                reason: "non-finite velocity or entropy".into(),
            });
        }
    }
    let profile = Arc::new(EntropyProfile::new(gas, grid, entropy)?);
    let tau_x = spatial_derivative(&tau, grid);
    let u_x = spatial_derivative(&u, grid);
    let m1 = sup(&tau)
        + sup(&u)
        + sup(&tau_x)
        + sup(&u_x)
        + sup(&profile.entropy)
        + sup(&profile.s_x)
        + sup(&profile.s_xx);
    let m2 = tau.iter().copied().fold(f64::INFINITY, f64::min);
    let snap = FieldSnapshot::from_primitive(gas, grid, 0.0, tau, u, profile)?;
    Ok((snap, InitialReport { m1, m2 }))
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

fn check_len(grid: &Grid1D, got: usize) -> Result<()> {
    let expected = grid.node_count();
    if got == expected {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}
