//! Characteristic paths traced alongside a run, and the Riccati equation
//! `dw/dt = a₀ − a₂w²` integrated along them.

use crate::error::Result;
use crate::evolution::{run_observed, RunResult, SolverConfig, StepObserver};
use crate::fields_init::FieldSnapshot;
use crate::gas_thermo::GasModel;
use crate::interp::{eval_at, Interpolation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `dx/dt = +c`, carrying `s` and `y`.
    Plus,
    /// `dx/dt = −c`, carrying `r` and `q`.
    Minus,
}

impl Family {
    pub fn sign(self) -> f64 {
        match self {
            Family::Plus => 1.0,
            Family::Minus => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::Plus => "plus",
            Family::Minus => "minus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSample {
    pub t: f64,
    /// Unwrapped position (periodic grids are not folded back).
    pub x: f64,
    pub c: f64,
    pub a0: f64,
    pub a2: f64,
    /// Field-diagnosed `y` (plus) or `q` (minus) at the path position.
    pub w_field: f64,
    /// `s` (plus) or `r` (minus) at the path position.
    pub invariant: f64,
    /// `|s_x|Δx` (plus) or `|r_x|Δx` (minus) over the grid oscillation of that variable.
    pub resolution: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharPath {
    pub family: Family,
    pub x0: f64,
    pub samples: Vec<PathSample>,
    /// Set when the path left a non-periodic window; sampling stops there.
    pub truncated: bool,
}

impl CharPath {
    /// Latest time up to which every sample satisfies `resolution ≤ fraction`.
    pub fn last_trusted_time(&self, fraction: f64) -> f64 {
        let mut t = self.samples.first().map_or(0.0, |s| s.t);
        for s in &self.samples {
            if s.resolution > fraction {
                break;
            }
            t = s.t;
        }
        t
    }
}

/// Sample the coefficients and diagnostics at `x` on a snapshot.
pub fn sample_path_point(
    gas: &GasModel,
    snap: &FieldSnapshot,
    family: Family,
    x: f64,
    kind: Interpolation,
) -> PathSample {
    let g = &snap.grid;
    let at = |v: &[f64]| eval_at(g, v, x, kind).value;
    let ent = &snap.entropy;
    let eta = at(&snap.eta);
    let m = at(&ent.m);
    let coeffs = gas.riccati_coeffs(eta, m, at(&ent.m_x), at(&ent.m_xx));
    let (w, inv, grad) = match family {
        Family::Plus => (&snap.y, &snap.s, &snap.s_x),
        Family::Minus => (&snap.q, &snap.r, &snap.r_x),
    };
    let (hi, lo) = inv
        .iter()
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(h, l), &v| {
            (h.max(v), l.min(v))
        });
    let osc = hi - lo;
    let resolution = if osc > 0.0 {
        at(grad).abs() * g.dx() / osc
    } else {
        0.0
    };
    PathSample {
        t: snap.t,
        x,
        c: at(&snap.c),
        a0: coeffs.a0,
        a2: coeffs.a2,
        w_field: at(w),
        invariant: at(inv),
        resolution,
    }
}

/// Observer advancing a set of paths with the run's two-stage rule.
#[derive(Debug, Clone)]
pub struct PathTracer {
    pub paths: Vec<CharPath>,
    interpolation: Interpolation,
}

impl PathTracer {
    pub fn new(seeds: &[(f64, Family)], interpolation: Interpolation) -> Self {
        Self {
            paths: seeds
                .iter()
                .map(|&(x0, family)| CharPath {
                    family,
                    x0,
                    samples: Vec::new(),
                    truncated: false,
                })
                .collect(),
            interpolation,
        }
    }

    pub fn into_paths(self) -> Vec<CharPath> {
        self.paths
    }
}

impl StepObserver for PathTracer {
    fn on_start(&mut self, gas: &GasModel, initial: &FieldSnapshot) {
        for p in &mut self.paths {
            let inside = initial.grid.is_periodic()
                || (p.x0 >= initial.grid.x_min && p.x0 <= initial.grid.x_max);
            if inside {
                p.samples.push(sample_path_point(
                    gas,
                    initial,
                    p.family,
                    p.x0,
                    self.interpolation,
                ));
            } else {
                p.truncated = true;
            }
        }
    }

    fn on_step(&mut self, gas: &GasModel, prev: &FieldSnapshot, next: &FieldSnapshot, dt: f64) {
        let g = next.grid;
        for p in &mut self.paths {
            if p.truncated {
                continue;
            }
            let Some(last) = p.samples.last() else {
                continue;
            };
            let sign = p.family.sign();
            let x = last.x;
            let c_old = eval_at(&g, &prev.c, x, self.interpolation).value;
            let x_pred = x + sign * c_old * dt;
            let c_new = eval_at(&g, &next.c, x_pred, self.interpolation).value;
            let x_new = x + sign * 0.5 * dt * (c_old + c_new);
            if !g.is_periodic() && (x_new < g.x_min || x_new > g.x_max) {
                p.truncated = true;
                continue;
            }
            p.samples.push(sample_path_point(
                gas,
                next,
                p.family,
                x_new,
                self.interpolation,
            ));
        }
    }
}

/// Seeds at every negative local minimum of `y` (plus) and `q` (minus),
/// followed by `uniform` evenly spaced seeds alternating plus and minus.
pub fn default_seeds(snapshot: &FieldSnapshot, uniform: usize) -> Vec<(f64, Family)> {
    let mut seeds = Vec::new();
    let len = snapshot.len();
    let periodic = snapshot.grid.is_periodic();
    for (family, w) in [(Family::Plus, &snapshot.y), (Family::Minus, &snapshot.q)] {
        for i in 0..len {
            let (prev, next) = if periodic {
                (w[(i + len - 1) % len], w[(i + 1) % len])
            } else {
                (
                    if i == 0 { f64::INFINITY } else { w[i - 1] },
                    if i + 1 == len {
                        f64::INFINITY
                    } else {
                        w[i + 1]
                    },
                )
            };
            if w[i] < 0.0 && w[i] < prev && w[i] <= next {
                seeds.push((snapshot.grid.x(i), family));
            }
        }
    }
    let g = &snapshot.grid;
    for k in 0..uniform {
        let x = g.x_min + (k as f64 + 0.5) * g.length() / uniform as f64;
        let family = if k % 2 == 0 {
            Family::Plus
        } else {
            Family::Minus
        };
        seeds.push((x, family));
    }
    seeds
}

/// Run with paths attached; the paths are returned alongside the run.
pub fn run_with_paths(
    gas: &GasModel,
    initial: &FieldSnapshot,
    cfg: &SolverConfig,
    seeds: &[(f64, Family)],
) -> Result<(RunResult, Vec<CharPath>)> {
    let mut tracer = PathTracer::new(seeds, cfg.interpolation);
    let run = run_observed(gas, initial, cfg, &mut [&mut tracer])?;
    Ok((run, tracer.into_paths()))
}

/// Riccati solution sampled at the path's sample times.
#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiSeries {
    pub t: Vec<f64>,
    pub w: Vec<f64>,
    /// Time at which `|w|` first exceeded the blowup scale.
    pub blowup_at: Option<f64>,
}

const MAX_SUBSTEPS: usize = 1 << 16;

/// Classic four-stage integration of `dw/dt = a₀ − a₂w²` with coefficients
/// linear in time between samples. Sub-steps shrink as `a₂|w|` grows; the
/// integration stops once `|w| > blowup_scale`.
pub fn riccati_along(path: &CharPath, w0: f64, blowup_scale: f64) -> RiccatiSeries {
    let mut out = RiccatiSeries {
        t: Vec::with_capacity(path.samples.len()),
        w: Vec::with_capacity(path.samples.len()),
        blowup_at: None,
    };
    let Some(first) = path.samples.first() else {
        return out;
    };
    out.t.push(first.t);
    out.w.push(w0);
    let mut w = w0;
    for pair in path.samples.windows(2) {
        let (s0, s1) = (&pair[0], &pair[1]);
        let h = s1.t - s0.t;
        if h <= 0.0 {
            continue;
        }
        let rhs = |tau: f64, w: f64| {
            let a0 = s0.a0 + (s1.a0 - s0.a0) * tau;
            let a2 = s0.a2 + (s1.a2 - s0.a2) * tau;
            a0 - a2 * w * w
        };
        let stiff = h * s0.a2.max(s1.a2) * w.abs() + h * (s0.a0.abs().max(s1.a0.abs())).sqrt();
        let mut sub = ((stiff / 0.02).ceil() as usize).clamp(1, MAX_SUBSTEPS);
        let mut tau = 0.0;
        let mut remaining = 1.0;
        while remaining > 0.0 {
            let k = (1.0 / sub as f64).min(remaining);
            let hh = k * h;
            let k1 = rhs(tau, w);
            let k2 = rhs(tau + 0.5 * k, w + 0.5 * hh * k1);
            let k3 = rhs(tau + 0.5 * k, w + 0.5 * hh * k2);
            let k4 = rhs(tau + k, w + hh * k3);
            w += hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            tau += k;
            remaining -= k;
            if remaining < 1e-14 {
                remaining = 0.0;
            }
            if !w.is_finite() || w.abs() > blowup_scale {
                out.blowup_at = Some(s0.t + tau * h);
                out.t.push(s0.t + tau * h);
                out.w.push(w);
                return out;
            }
            // Tighten the sub-step as the solution steepens.
            let need =
                ((h * s0.a2.max(s1.a2) * w.abs() / 0.02).ceil() as usize).clamp(1, MAX_SUBSTEPS);
            if need > sub {
                sub = need;
            }
        }
        out.t.push(s1.t);
        out.w.push(w);
    }
    out
}

/// `∫₀^T a₂ dt` along the path by the trapezoid rule; the final partial
/// interval is cut at `T` by linear interpolation.
pub fn a2_integral(path: &CharPath, t_end: f64) -> f64 {
    let mut total = 0.0;
    for pair in path.samples.windows(2) {
        let (s0, s1) = (&pair[0], &pair[1]);
        if s0.t >= t_end {
            break;
        }
        if s1.t <= t_end {
            total += 0.5 * (s0.a2 + s1.a2) * (s1.t - s0.t);
        } else {
            let frac = (t_end - s0.t) / (s1.t - s0.t);
            let a_end = s0.a2 + frac * (s1.a2 - s0.a2);
            total += 0.5 * (s0.a2 + a_end) * (t_end - s0.t);
            break;
        }
    }
    total
}
