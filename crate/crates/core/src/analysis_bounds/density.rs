use crate::error::{Error, Result};
use crate::evolution::{StepMonitor, StepObserver};
use crate::fields_init::{FieldSnapshot, GradientBudget, Grid1D};
use crate::gas_thermo::GasModel;
use crate::interp::{eval_at, Interpolation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DensityMode {
    /// Constant `K₀`, budget `Y + Q`.
    Isentropic,
    /// Constant `K₆`, budget `Ȳ + Q̄`.
    Full,
}

/// Time-dependent upper bound `τ ≤ [τ₀^β + K·(Y+Q)·t]^{1/β}`, `β = (3−γ)/4`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityBoundParams {
    pub mode: DensityMode,
    /// `K₀` or `K₆`.
    pub constant: f64,
    /// `Y + Q` or `Ȳ + Q̄`.
    pub y_sum: f64,
    pub tau0: Vec<f64>,
    pub grid: Grid1D,
    pub gamma: f64,
}

fn require_subcritical(gamma: f64) -> Result<()> {
    if gamma < 3.0 {
        Ok(())
    } else {
        Err(Error::NotApplicable(format!(
            "density upper bound needs 1 < gamma < 3, got {gamma}"
        )))
    }
}

/// `K₀ = ((3−γ)/8)(Kγ)^{-1/4}√K_c`.
pub fn isentropic_density_constant(gas: &GasModel) -> Result<f64> {
    let g = gas.gamma();
    require_subcritical(g)?;
    Ok((3.0 - g) / 8.0 * (gas.k() * g).powf(-0.25) * gas.constants().k_c.sqrt())
}

/// `K₆ = ((3−γ)/4) M_U^{3(3−γ)/(2(3γ−1))} C^{-(γ+1)/(2(γ−1))}`.
pub fn full_density_constant(gas: &GasModel, m_u: f64) -> Result<f64> {
    let g = gas.gamma();
    require_subcritical(g)?;
    Ok((3.0 - g) / 4.0 * m_u.powf(gas.m_exponent()) * gas.eta_scale().powf(-gas.eta_exponent()))
}

impl DensityBoundParams {
    pub fn isentropic(
        gas: &GasModel,
        initial: &FieldSnapshot,
        budget: &GradientBudget,
    ) -> Result<Self> {
        Ok(Self {
            mode: DensityMode::Isentropic,
            constant: isentropic_density_constant(gas)?,
            y_sum: budget.y_sup + budget.q_sup,
            tau0: initial.tau.clone(),
            grid: initial.grid,
            gamma: gas.gamma(),
        })
    }

    pub fn full(
        gas: &GasModel,
        initial: &FieldSnapshot,
        budget: &GradientBudget,
        m_u: f64,
    ) -> Result<Self> {
        Ok(Self {
            mode: DensityMode::Full,
            constant: full_density_constant(gas, m_u)?,
            y_sum: budget.sum(),
            tau0: initial.tau.clone(),
            grid: initial.grid,
            gamma: gas.gamma(),
        })
    }

    pub fn exponent(&self) -> f64 {
        (3.0 - self.gamma) / 4.0
    }

    fn bound_from_tau0(&self, tau0: f64, t: f64) -> f64 {
        let b = self.exponent();
        (tau0.powf(b) + self.constant * self.y_sum * t).powf(1.0 / b)
    }

    pub fn bound_at_node(&self, i: usize, t: f64) -> f64 {
        self.bound_from_tau0(self.tau0[i], t)
    }

    /// Largest bound over the grid at time `t`.
    pub fn bound_sup(&self, t: f64) -> f64 {
        let tmax = self.tau0.iter().copied().fold(0.0, f64::max);
        self.bound_from_tau0(tmax, t)
    }
}

/// Bound on `τ(x, t)`; `τ₀` is interpolated between nodes.
pub fn density_upper_bound(params: &DensityBoundParams, x: f64, t: f64) -> f64 {
    let tau0 = eval_at(&params.grid, &params.tau0, x, Interpolation::MonotoneCubic).value;
    params.bound_from_tau0(tau0, t)
}

/// Worst per-node density margin seen during a run.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityTrack {
    pub params: DensityBoundParams,
    /// `min (bound − τ)` over all nodes and steps.
    pub worst_margin: f64,
    /// `min (bound − τ)/bound`.
    pub worst_relative: f64,
    pub worst_t: f64,
    pub worst_x: f64,
    pub steps: usize,
}

/// Observer comparing every node with the density bound after each step.
#[derive(Debug, Clone)]
pub struct DensityMonitor {
    track: DensityTrack,
}

impl DensityMonitor {
    pub fn new(params: DensityBoundParams) -> Self {
        Self {
            track: DensityTrack {
                params,
                worst_margin: f64::INFINITY,
                worst_relative: f64::INFINITY,
                worst_t: 0.0,
                worst_x: 0.0,
                steps: 0,
            },
        }
    }

    pub fn check(&mut self, snap: &FieldSnapshot) {
        let tr = &mut self.track;
        for (i, &tau) in snap.tau.iter().enumerate() {
            let bound = tr.params.bound_at_node(i, snap.t);
            let margin = bound - tau;
            if margin < tr.worst_margin {
                tr.worst_margin = margin;
                tr.worst_t = snap.t;
                tr.worst_x = snap.grid.x(i);
            }
            tr.worst_relative = tr.worst_relative.min(margin / bound);
        }
    }

    pub fn track(&self) -> &DensityTrack {
        &self.track
    }

    pub fn into_track(self) -> DensityTrack {
        self.track
    }
}

impl StepObserver for DensityMonitor {
    fn on_start(&mut self, _gas: &GasModel, initial: &FieldSnapshot) {
        self.check(initial);
    }

    fn on_step(&mut self, _gas: &GasModel, _prev: &FieldSnapshot, next: &FieldSnapshot, _dt: f64) {
        self.track.steps += 1;
        self.check(next);
    }
}

/// Largest difference in `max τ` between two runs of the same data at
/// different resolutions, with the second run interpolated linearly in time
/// onto the first run's monitor times inside their common interval.
pub fn max_tau_discrepancy(fine: &[StepMonitor], coarse: &[StepMonitor]) -> f64 {
    if coarse.is_empty() {
        return f64::INFINITY;
    }
    let t_last = coarse[coarse.len() - 1].t;
    let mut worst = 0.0f64;
    let mut j = 0;
    for m in fine {
        if m.t > t_last {
            break;
        }
        while j + 1 < coarse.len() && coarse[j + 1].t < m.t {
            j += 1;
        }
        let v = if j + 1 < coarse.len() && coarse[j + 1].t > coarse[j].t && m.t >= coarse[j].t {
            let w = (m.t - coarse[j].t) / (coarse[j + 1].t - coarse[j].t);
            coarse[j].max_tau + w.min(1.0) * (coarse[j + 1].max_tau - coarse[j].max_tau)
        } else {
            coarse[j].max_tau
        };
        worst = worst.max((m.max_tau - v).abs());
    }
    worst
}
