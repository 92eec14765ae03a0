//! Semi-Lagrangian time advance of the Riemann variables.
//!
//! Each step follows the `±` characteristics back from every node, reads the
//! invariant at the foot by interpolation and adds the entropy source. A
//! predictor with frozen speeds is corrected by trapezoidal averaging of the
//! speed and source along the path. `m(x)` is never advected.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields_init::{gradient_budget, FieldSnapshot, GradientBudget};
use crate::gas_thermo::GasModel;
use crate::interp::{GridInterpolant, Interpolation};

/// Default ratio between the detected gradient and the initial budget.
pub const DEFAULT_BLOWUP_FACTOR: f64 = 20.0;
/// Smallest allowed ratio of a record to the running maximum in the growth window.
pub const BLOWUP_JITTER: f64 = 0.9;
/// Number of steps over which growth is required before blowup is declared.
pub const BLOWUP_WINDOW: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub cfl: f64,
    pub horizon: f64,
    /// Steps between stored snapshots; 0 stores only the first and last.
    pub snapshot_cadence: usize,
    pub blowup_factor: f64,
    /// `None` means `1e-12·horizon`.
    pub dt_min: Option<f64>,
    pub interpolation: Interpolation,
    /// Critical threshold entering `Ȳ`, `Q̄` (0 for isentropic runs).
    pub critical_threshold: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            cfl: 0.9,
            horizon: 1.0,
            snapshot_cadence: 0,
            blowup_factor: DEFAULT_BLOWUP_FACTOR,
            dt_min: None,
            interpolation: Interpolation::MonotoneCubic,
            critical_threshold: 0.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidSolver(format!(
                "cfl = {} outside (0, 1]",
                self.cfl
            )));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidSolver(format!(
                "horizon = {} must be positive",
                self.horizon
            )));
        }
        if !(self.blowup_factor > 10.0) {
            return Err(Error::InvalidSolver(format!(
                "blowup_factor = {} must exceed 10",
                self.blowup_factor
            )));
        }
        if let Some(d) = self.dt_min {
            if !(d > 0.0) {
                return Err(Error::InvalidSolver(format!(
                    "dt_min = {d} must be positive"
                )));
            }
        }
        if !(self.critical_threshold >= 0.0) {
            return Err(Error::InvalidSolver(
                "critical threshold must be >= 0".into(),
            ));
        }
        Ok(())
    }

    pub fn dt_floor(&self) -> f64 {
        self.dt_min.unwrap_or(1e-12 * self.horizon)
    }
}

/// Per-step extrema of the evolving state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepMonitor {
    pub step: usize,
    pub t: f64,
    /// Step that produced this state (0 for the initial record).
    pub dt: f64,
    pub max_y: f64,
    pub min_y: f64,
    pub max_q: f64,
    pub min_q: f64,
    pub min_tau: f64,
    pub max_tau: f64,
    pub max_abs_s: f64,
    pub max_abs_r: f64,
    pub max_abs_u: f64,
    pub max_eta: f64,
    /// `max(|s_x|, |r_x|)·Δx` relative to the oscillation of `s` resp. `r`.
    pub resolution_ratio: f64,
    /// `−c·s_x` at the node of most negative `y`.
    pub lax_indicator: f64,
    /// Feet that left a non-periodic window during this step.
    pub clamped_feet: usize,
}

impl StepMonitor {
    pub fn from_snapshot(step: usize, dt: f64, clamped_feet: usize, snap: &FieldSnapshot) -> Self {
        let (mut max_y, mut min_y, mut arg_min_y) = (f64::NEG_INFINITY, f64::INFINITY, 0);
        for (i, &y) in snap.y.iter().enumerate() {
            max_y = max_y.max(y);
            if y < min_y {
                min_y = y;
                arg_min_y = i;
            }
        }
        let (max_q, min_q) = extrema(&snap.q);
        let (min_tau, max_tau) = {
            let (hi, lo) = extrema(&snap.tau);
            (lo, hi)
        };
        let dx = snap.grid.dx();
        let ratio = |d: &[f64], v: &[f64]| {
            let (hi, lo) = extrema(v);
            let osc = hi - lo;
            if osc > 0.0 {
                abs_max(d) * dx / osc
            } else {
                0.0
            }
        };
        Self {
            step,
            t: snap.t,
            dt,
            max_y,
            min_y,
            max_q,
            min_q,
            min_tau,
            max_tau,
            max_abs_s: abs_max(&snap.s),
            max_abs_r: abs_max(&snap.r),
            max_abs_u: abs_max(&snap.u),
            max_eta: extrema(&snap.eta).0,
            resolution_ratio: ratio(&snap.s_x, &snap.s).max(ratio(&snap.r_x, &snap.r)),
            lax_indicator: -snap.c[arg_min_y] * snap.s_x[arg_min_y],
            clamped_feet,
        }
    }

    /// `max(|y|, |q|)` over the grid.
    pub fn gradient_magnitude(&self) -> f64 {
        self.max_y
            .abs()
            .max(self.min_y.abs())
            .max(self.max_q.abs())
            .max(self.min_q.abs())
    }
}

fn extrema(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), &x| {
            (hi.max(x), lo.min(x))
        })
}

fn abs_max(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    HorizonReached,
    BlowupDetected { t_lo: f64, t_hi: f64 },
    StepFailure { t: f64, reason: String },
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub snapshots: Vec<FieldSnapshot>,
    /// One record per state, starting with the initial one.
    pub monitors: Vec<StepMonitor>,
    pub termination: Termination,
    pub budget: GradientBudget,
    /// Last valid state.
    pub last: FieldSnapshot,
}

impl RunResult {
    pub fn bracket(&self) -> Option<(f64, f64)> {
        match self.termination {
            Termination::BlowupDetected { t_lo, t_hi } => Some((t_lo, t_hi)),
            _ => None,
        }
    }

    pub fn final_time(&self) -> f64 {
        self.last.t
    }
}

/// Hook called after every accepted step, inside the run loop.
pub trait StepObserver {
    fn on_start(&mut self, _gas: &GasModel, _initial: &FieldSnapshot) {}
    fn on_step(&mut self, gas: &GasModel, prev: &FieldSnapshot, next: &FieldSnapshot, dt: f64);
}

/// `cfl·Δx / max c`, capped at `remaining`.
pub fn cfl_dt(snapshot: &FieldSnapshot, cfl: f64, remaining: f64) -> Result<f64> {
    let c_max = snapshot.c.iter().copied().fold(0.0, f64::max);
    if !(c_max.is_finite() && c_max > 0.0) {
        return Err(Error::StepFailure {
            t: snapshot.t,
            reason: format!("maximum sound speed {c_max} is not finite and positive"),
        });
    }
    Ok((cfl * snapshot.grid.dx() / c_max).min(remaining))
}

/// Incoming invariants beyond a non-periodic window, frozen at their initial values.
#[derive(Debug, Clone, Copy, PartialEq)]
struct FarField {
    s_left: f64,
    r_right: f64,
}

/// One two-stage step; returns the new state and the number of clamped feet.
pub fn step(
    gas: &GasModel,
    snap: &FieldSnapshot,
    dt: f64,
    interpolation: Interpolation,
) -> Result<(FieldSnapshot, usize)> {
    let far = FarField {
        s_left: snap.s[0],
        r_right: snap.r[snap.len() - 1],
    };
    step_with_far_field(gas, snap, dt, interpolation, far)
}

fn step_with_far_field(
    gas: &GasModel,
    snap: &FieldSnapshot,
    dt: f64,
    interpolation: Interpolation,
    far: FarField,
) -> Result<(FieldSnapshot, usize)> {
    let grid = &snap.grid;
    let len = snap.len();
    let ent = &snap.entropy;
    let source: Vec<f64> = (0..len)
        .map(|i| gas.transport_source(snap.c[i], ent.m_x[i], snap.eta[i]))
        .collect();
    let isentropic = ent.m_x.iter().all(|&v| v == 0.0);
    let i_s = GridInterpolant::new(grid, &snap.s, interpolation);
    let i_r = GridInterpolant::new(grid, &snap.r, interpolation);
    let i_c = GridInterpolant::new(grid, &snap.c, interpolation);
    let i_src = if isentropic {
        None
    } else {
        Some(GridInterpolant::new(grid, &source, interpolation))
    };
    let src_at = |x: f64| i_src.as_ref().map_or(0.0, |it| it.eval(x).value);
    let xs = grid.nodes();
    let mut clamped = 0usize;

    // Predictor along straight characteristics with the old speed.
    let mut s1 = vec![0.0; len];
    let mut r1 = vec![0.0; len];
    for i in 0..len {
        let fp = xs[i] - snap.c[i] * dt;
        let sp = i_s.eval(fp);
        s1[i] = if sp.outside {
            far.s_left
        } else {
            sp.value + dt * src_at(fp)
        };
        let fm = xs[i] + snap.c[i] * dt;
        let rm = i_r.eval(fm);
        r1[i] = if rm.outside {
            far.r_right
        } else {
            rm.value + dt * src_at(fm)
        };
    }
    let mut c1 = vec![0.0; len];
    let mut src1 = vec![0.0; len];
    for i in 0..len {
        if !(s1[i] > r1[i]) || !s1[i].is_finite() || !r1[i].is_finite() {
            return Err(vacuum(snap.t, i, r1[i], s1[i]));
        }
        let eta = (s1[i] - r1[i]) / (2.0 * ent.m[i]);
        c1[i] = gas.sound_speed_from_eta(eta, ent.m[i]);
        src1[i] = gas.transport_source(c1[i], ent.m_x[i], eta);
    }

    // Corrector: trapezoidal speed and source along the path.
    let mut s2 = vec![0.0; len];
    let mut r2 = vec![0.0; len];
    let half = 0.5 * dt;
    for i in 0..len {
        let fp1 = xs[i] - snap.c[i] * dt;
        let fp = xs[i] - half * (c1[i] + i_c.eval(fp1).value);
        let sp = i_s.eval(fp);
        s2[i] = if sp.outside {
            clamped += 1;
            far.s_left
        } else {
            sp.value + half * (src_at(fp) + src1[i])
        };
        let fm1 = xs[i] + snap.c[i] * dt;
        let fm = xs[i] + half * (c1[i] + i_c.eval(fm1).value);
        let rm = i_r.eval(fm);
        r2[i] = if rm.outside {
            clamped += 1;
            far.r_right
        } else {
            rm.value + half * (src_at(fm) + src1[i])
        };
    }
    for i in 0..len {
        if !(s2[i] > r2[i]) || !s2[i].is_finite() || !r2[i].is_finite() {
            return Err(vacuum(snap.t + dt, i, r2[i], s2[i]));
        }
    }
    let next = FieldSnapshot::from_riemann(gas, grid, snap.t + dt, r2, s2, Arc::clone(ent))
        .map_err(|e| Error::StepFailure {
            t: snap.t + dt,
            reason: e.to_string(),
        })?;
    Ok((next, clamped))
}

fn vacuum(t: f64, i: usize, r: f64, s: f64) -> Error {
    Error::StepFailure {
        t,
        reason: format!("vacuum approach at node {i}: r = {r}, s = {s}"),
    }
}

/// Blowup test on the most recent monitor records.
///
/// `monitors[0]` must be the initial record. Declared when
/// `G = max(|y|,|q|) ≥ factor·(1 + max(Ȳ + Q̄, G₀))`, with `G₀` the initial
/// value, and `G` grew over
/// the last [`BLOWUP_WINDOW`] steps: the newest value is the largest in the
/// window and no record fell below [`BLOWUP_JITTER`] times the running
/// maximum before it. The tolerance absorbs the node-sampling jitter of a
/// steepening front. The bracket runs from the previous record time to one
/// step beyond the current one.
pub fn detect_blowup(
    monitors: &[StepMonitor],
    budget: &GradientBudget,
    blowup_factor: f64,
) -> Option<(f64, f64)> {
    let n = monitors.len();
    if n < BLOWUP_WINDOW + 1 {
        return None;
    }
    let last = &monitors[n - 1];
    let initial = monitors[0].gradient_magnitude();
    if last.gradient_magnitude() < blowup_factor * (1.0 + budget.sum().max(initial)) {
        return None;
    }
    let tail = &monitors[n - 1 - BLOWUP_WINDOW..];
    let mut running = tail[0].gradient_magnitude();
    let mut growing = true;
    for m in &tail[1..] {
        let g = m.gradient_magnitude();
        growing &= g >= BLOWUP_JITTER * running;
        running = running.max(g);
    }
    if !growing || last.gradient_magnitude() < running || !(running > tail[0].gradient_magnitude())
    {
        return None;
    }
    let prev = &monitors[n - 2];
    Some((prev.t, last.t + last.dt))
}

pub fn run(gas: &GasModel, initial: &FieldSnapshot, cfg: &SolverConfig) -> Result<RunResult> {
    run_observed(gas, initial, cfg, &mut [])
}

/// Advance to the horizon or first detected blowup, calling every observer
/// after each accepted step.
pub fn run_observed(
    gas: &GasModel,
    initial: &FieldSnapshot,
    cfg: &SolverConfig,
    observers: &mut [&mut dyn StepObserver],
) -> Result<RunResult> {
    cfg.validate()?;
    let budget = gradient_budget(initial, cfg.critical_threshold);
    let far = FarField {
        s_left: initial.s[0],
        r_right: initial.r[initial.len() - 1],
    };
    let dt_floor = cfg.dt_floor();
    let t_end = initial.t + cfg.horizon;
    for obs in observers.iter_mut() {
        obs.on_start(gas, initial);
    }
    let mut monitors = vec![StepMonitor::from_snapshot(0, 0.0, 0, initial)];
    let mut snapshots = vec![initial.clone()];
    let mut current = initial.clone();
    let mut steps = 0usize;
    let termination = loop {
        let remaining = t_end - current.t;
        if remaining <= 1e-14 * cfg.horizon.max(1.0) {
            break Termination::HorizonReached;
        }
        let dt = match cfl_dt(&current, cfg.cfl, f64::INFINITY) {
            Ok(dt) => dt,
            Err(e) => break failure(&current, e),
        };
        if dt < dt_floor {
            break Termination::StepFailure {
                t: current.t,
                reason: format!("time step {dt:e} below floor {dt_floor:e}"),
            };
        }
        let dt = dt.min(remaining);
        let (next, clamped) = match step_with_far_field(gas, &current, dt, cfg.interpolation, far) {
            Ok(v) => v,
            Err(e) => break failure(&current, e),
        };
        steps += 1;
        for obs in observers.iter_mut() {
            obs.on_step(gas, &current, &next, dt);
        }
        monitors.push(StepMonitor::from_snapshot(steps, dt, clamped, &next));
        current = next;
        if cfg.snapshot_cadence > 0 && steps.is_multiple_of(cfg.snapshot_cadence) {
            snapshots.push(current.clone());
        }
        if let Some((t_lo, t_hi)) = detect_blowup(&monitors, &budget, cfg.blowup_factor) {
            break Termination::BlowupDetected { t_lo, t_hi };
        }
    };
    if snapshots.last().map(|s| s.t) != Some(current.t) {
        snapshots.push(current.clone());
    }
    Ok(RunResult {
        snapshots,
        monitors,
        termination,
        budget,
        last: current,
    })
}

fn failure(current: &FieldSnapshot, e: Error) -> Termination {
    match e {
        Error::StepFailure { t, reason } => Termination::StepFailure { t, reason },
        other => Termination::StepFailure {
            t: current.t,
            reason: other.to_string(),
        },
    }
}
