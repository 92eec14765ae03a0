use std::sync::Arc;

use super::{EntropyProfile, FieldSnapshot, Grid1D};
use crate::error::{Error, Result};
use crate::gas_thermo::{critical_theta, GasModel};

/// Pressure-balanced rest state `τ = K_τS e^{S/(γc_v)}`, `u = 0`.
pub fn stationary_solution(
    gas: &GasModel,
    grid: &Grid1D,
    entropy: &dyn Fn(f64) -> f64,
    k_tau_s: f64,
) -> Result<FieldSnapshot> {
    if !(k_tau_s > 0.0 && k_tau_s.is_finite()) {
        return Err(Error::InvalidInitialData {
            x: grid.x_min,
            reason: format!("K_tauS = {k_tau_s} must be positive"),
        });
    }
    let xs = grid.nodes();
    let s: Vec<f64> = xs.iter().map(|&x| entropy(x)).collect();
    let tau = s
        .iter()
        .map(|&sv| k_tau_s * (sv / (gas.gamma() * gas.c_v())).exp())
        .collect();
    let profile = Arc::new(EntropyProfile::new(gas, grid, s)?);
    FieldSnapshot::from_primitive(gas, grid, 0.0, tau, vec![0.0; xs.len()], profile)
}

/// Stationary data whose compression saturates `y² = a₀/a₂` at every node.
#[derive(Debug, Clone)]
pub struct CriticalFamily {
    pub snapshot: FieldSnapshot,
    pub theta: f64,
    /// Closed-form `y`, constant in `x`.
    pub y_closed: f64,
    /// `y` from analytic derivatives of `m` at each node.
    pub y_nodes: Vec<f64>,
    /// `a₀/a₂` from analytic derivatives of `m` at each node.
    pub ratio_nodes: Vec<f64>,
    /// `max |y² − a₀/a₂|` over the nodes.
    pub max_residual: f64,
}

/// `m^θ(x) = slope·x + offset`, with the stationary state built on it.
pub fn critical_family(
    gas: &GasModel,
    grid: &Grid1D,
    slope: f64,
    offset: f64,
    k_tau_s: f64,
) -> Result<CriticalFamily> {
    let g = gas.gamma();
    let theta = critical_theta(g);
    let xs = grid.nodes();
    for &x in &xs {
        let l = slope * x + offset;
        if !(l > 0.0) {
            return Err(Error::InvalidInitialData {
                x,
                reason: format!("m^theta = {l} is not positive"),
            });
        }
    }
    let two_cv = 2.0 * gas.c_v();
    let m_of = |x: f64| (slope * x + offset).powf(1.0 / theta);
    let snapshot = stationary_solution(gas, grid, &|x| two_cv * m_of(x).ln(), k_tau_s)?;

    let p = 1.0 / theta;
    let mut y_nodes = Vec::with_capacity(xs.len());
    let mut ratio_nodes = Vec::with_capacity(xs.len());
    let mut max_residual = 0.0f64;
    for &x in &xs {
        let l = slope * x + offset;
        let m = l.powf(p);
        let m_x = p * l.powf(p - 1.0) * slope;
        let m_xx = p * (p - 1.0) * l.powf(p - 2.0) * slope * slope;
        let tau = k_tau_s * m.powf(2.0 / g);
        let eta = gas.eta_from_tau(tau)?;
        let s_x = m_x * eta / g;
        let (y, _) = gas.gradient_vars(eta, m, m_x, s_x, -s_x);
        let ratio = gas.a0_over_a2(eta, m, m_x, m_xx);
        max_residual = max_residual.max((y * y - ratio).abs());
        y_nodes.push(y);
        ratio_nodes.push(ratio);
    }
    let y_closed = (g - 1.0) / (theta * g * (3.0 * g - 1.0))
        * gas.eta_scale().powf((3.0 * g - 1.0) / (2.0 * (g - 1.0)))
        * k_tau_s.powf(-(3.0 * g - 1.0) / 4.0)
        * slope;
    Ok(CriticalFamily {
        snapshot,
        theta,
        y_closed,
        y_nodes,
        ratio_nodes,
        max_residual,
    })
}
