use super::density::{DensityBoundParams, DensityTrack};
use super::thresholds::LinftyBounds;
use crate::evolution::RunResult;
use crate::fields_init::GradientBudget;

/// Bounds a finished run is checked against.
#[derive(Debug, Clone, Default)]
pub struct RunBounds {
    pub budget: Option<GradientBudget>,
    /// Per-node, per-step density margins recorded during the run.
    pub density_track: Option<DensityTrack>,
    /// Used on stored snapshots when no track is available.
    pub density: Option<DensityBoundParams>,
    pub linfty: Option<LinftyBounds>,
    /// Absolute slack on `y ≤ Ȳ`, `q ≤ Q̄` and the `L∞` bounds.
    pub tolerance: f64,
    /// Relative slack on the density bound, plus an absolute scheme error.
    pub density_rel_tolerance: f64,
    pub density_abs_tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub passed: bool,
    /// `bound − value` at the worst point (negative means exceeded).
    pub worst_margin: f64,
    pub at_t: f64,
    pub at_x: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MonitorReport {
    pub checks: Vec<BoundCheck>,
}

impl MonitorReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn monitor_check(
    run: &RunResult,
    name: &'static str,
    bound: f64,
    tol: f64,
    value: impl Fn(&crate::evolution::StepMonitor) -> f64,
) -> BoundCheck {
    let mut worst = f64::INFINITY;
    let mut at_t = 0.0;
    for m in &run.monitors {
        let margin = bound - value(m);
        if margin < worst {
            worst = margin;
            at_t = m.t;
        }
    }
    BoundCheck {
        name,
        passed: worst >= -tol,
        worst_margin: worst,
        at_t,
        at_x: None,
    }
}

/// Compare a completed run with every applicable bound.
pub fn verify_run(run: &RunResult, bounds: &RunBounds) -> MonitorReport {
    let mut checks = Vec::new();
    let tol = bounds.tolerance;
    if let Some(b) = &bounds.budget {
        checks.push(monitor_check(run, "y_upper", b.y_bar, tol, |m| m.max_y));
        checks.push(monitor_check(run, "q_upper", b.q_bar, tol, |m| m.max_q));
    }
    if let Some(track) = &bounds.density_track {
        let allowed = bounds.density_rel_tolerance * track.params.bound_sup(track.worst_t)
            + bounds.density_abs_tolerance;
        checks.push(BoundCheck {
            name: "tau_upper",
            passed: track.worst_margin >= -allowed,
            worst_margin: track.worst_margin,
            at_t: track.worst_t,
            at_x: Some(track.worst_x),
        });
    } else if let Some(p) = &bounds.density {
        let mut worst = (f64::INFINITY, 0.0, 0.0, 0.0);
        for snap in &run.snapshots {
            for (i, &tau) in snap.tau.iter().enumerate() {
                let bound = p.bound_at_node(i, snap.t);
                if bound - tau < worst.0 {
                    worst = (bound - tau, snap.t, snap.grid.x(i), bound);
                }
            }
        }
        let allowed = bounds.density_rel_tolerance * worst.3 + bounds.density_abs_tolerance;
        checks.push(BoundCheck {
            name: "tau_upper",
            passed: worst.0 >= -allowed,
            worst_margin: worst.0,
            at_t: worst.1,
            at_x: Some(worst.2),
        });
    }
    if let Some(l) = &bounds.linfty {
        checks.push(monitor_check(run, "s_abs", l.s_bound, tol, |m| m.max_abs_s));
        checks.push(monitor_check(run, "r_abs", l.r_bound, tol, |m| m.max_abs_r));
        checks.push(monitor_check(run, "u_abs", l.u_bound, tol, |m| m.max_abs_u));
        checks.push(monitor_check(run, "eta_upper", l.e_u, tol, |m| m.max_eta));
    }
    let initial = run.snapshots.first().map(|s| s.entropy_values().to_vec());
    let frozen = run
        .snapshots
        .iter()
        .chain(std::iter::once(&run.last))
        .all(|s| Some(s.entropy_values()) == initial.as_deref());
    checks.push(BoundCheck {
        name: "entropy_frozen",
        passed: frozen,
        worst_margin: if frozen { 0.0 } else { -1.0 },
        at_t: 0.0,
        at_x: None,
    });
    MonitorReport { checks }
}

/// Least-squares line through `(t, max τ)` over the last `tail` fraction of
/// the monitors; returns `(slope, intercept, R²)`.
pub fn tail_linear_fit(run: &RunResult, tail: f64) -> (f64, f64, f64) {
    let t_end = run.monitors.last().map_or(0.0, |m| m.t);
    let t_start = t_end * (1.0 - tail);
    let pts: Vec<(f64, f64)> = run
        .monitors
        .iter()
        .filter(|m| m.t >= t_start)
        .map(|m| (m.t, m.max_tau))
        .collect();
    linear_fit(&pts)
}

/// Ordinary least squares; returns `(slope, intercept, R²)`.
pub fn linear_fit(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return (0.0, pts.first().map_or(0.0, |p| p.1), 0.0);
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 {
        sxy * sxy / (sxx * syy)
    } else {
        1.0
    };
    (slope, intercept, r2)
}
