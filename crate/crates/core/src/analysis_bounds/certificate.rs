use std::fmt;

use super::density::{full_density_constant, isentropic_density_constant};
use super::envelope::{
    a2_floor, a2_prefactor, blowup_time_upper, isentropic_envelope, margin_factor, A2Envelope,
};
use super::thresholds::{
    global_threshold_n, linfty_bounds, local_domain, DomainOfDetermination, LinftyBounds,
};
use crate::characteristics::Family;
use crate::error::Result;
use crate::evolution::{RunResult, Termination};
use crate::fields_init::{entropy_diagnostics, gradient_budget, FieldSnapshot};
use crate::gas_thermo::GasModel;

/// Relative slack on `T_ub` allowed when reconciling with a run.
pub const BRACKET_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CertificateMode {
    /// `S` constant; threshold 0.
    Isentropic,
    /// Finite entropy variation over the grid; threshold `N`.
    FullGlobal,
    /// Window `[alpha, beta]`; threshold `N_ab(1 + B_ab)`.
    FullLocal { alpha: f64, beta: f64 },
}

impl CertificateMode {
    pub fn label(&self) -> &'static str {
        match self {
            CertificateMode::Isentropic => "isentropic",
            CertificateMode::FullGlobal => "full-global",
            CertificateMode::FullLocal { .. } => "full-local",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    CertifiedBlowup,
    ThresholdNotMet,
    BoundViolated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedBlowup => "certified-blowup",
            Verdict::ThresholdNotMet => "threshold-not-met",
            Verdict::BoundViolated => "bound-violated",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlowupCertificate {
    pub mode: CertificateMode,
    /// Most negative initial `y` or `q` in the region covered by the mode.
    pub w0: f64,
    pub w0_family: Family,
    pub w0_x: f64,
    pub threshold: f64,
    /// Realized margin `−w0/N − 1` (`ε` globally, `B` on a window); infinite at zero threshold.
    pub margin: f64,
    /// `margin(2+margin)/(1+margin)²`.
    pub factor: f64,
    pub envelope: A2Envelope,
    /// Infinite unless the hypothesis holds.
    pub t_ub: f64,
    pub bracket: Option<(f64, f64)>,
    pub verdict: Verdict,
    pub linfty: Option<LinftyBounds>,
    pub domain: Option<DomainOfDetermination>,
    pub note: String,
}

/// Certificate for initial data, before any run.
pub fn certify(
    gas: &GasModel,
    snap: &FieldSnapshot,
    mode: CertificateMode,
) -> Result<BlowupCertificate> {
    let g = gas.gamma();
    match mode {
        CertificateMode::Isentropic => {
            let (w0, fam, x) = most_negative(snap, 0..snap.len());
            let budget = gradient_budget(snap, 0.0);
            let k0 = isentropic_density_constant(gas).ok();
            let envelope = isentropic_envelope(gas, snap, k0, budget.y_sup + budget.q_sup);
            let mut note = String::new();
            if !snap.entropy.is_constant() {
                note.push_str("entropy is not constant; isentropic bounds do not apply. ");
            }
            Ok(assemble(mode, w0, fam, x, 0.0, envelope, None, None, note))
        }
        CertificateMode::FullGlobal => {
            let diag = entropy_diagnostics(gas, snap, None)?;
            let lin = linfty_bounds(gas, diag.m_s, diag.m_r, diag.v, diag.m_l, diag.m_u);
            let n = global_threshold_n(gas, &diag, lin.e_u);
            let budget = gradient_budget(snap, n);
            let envelope = if g < 3.0 {
                let beta = (3.0 - g) / 4.0;
                let tau_ref = snap.tau.iter().copied().fold(0.0, f64::max);
                let scale = tau_ref.powf(-beta);
                A2Envelope::Decaying {
                    k10: a2_prefactor(gas, diag.m_l) * scale,
                    k9: full_density_constant(gas, diag.m_u)? * budget.sum() * scale,
                }
            } else {
                A2Envelope::Constant {
                    floor: a2_floor(gas, diag.m_u, lin.e_u),
                }
            };
            let (w0, fam, x) = most_negative(snap, 0..snap.len());
            Ok(assemble(
                mode,
                w0,
                fam,
                x,
                n,
                envelope,
                Some(lin),
                None,
                String::new(),
            ))
        }
        CertificateMode::FullLocal { alpha, beta } => {
            let dom = local_domain(gas, snap, alpha, beta)?;
            let (w0, fam, x) = most_negative(snap, dom.diagnostics.nodes.clone());
            let envelope = if dom.is_isentropic_window() {
                let budget = gradient_budget(snap, 0.0);
                isentropic_envelope(
                    gas,
                    snap,
                    isentropic_density_constant(gas).ok(),
                    budget.y_sup + budget.q_sup,
                )
            } else {
                dom.envelope(g)
            };
            let note = if dom.is_isentropic_window() {
                "isentropic window: threshold 0, margin infinite. ".to_string()
            } else {
                String::new()
            };
            let threshold = dom.threshold();
            let mut cert = assemble(mode, w0, fam, x, dom.n_ab, envelope, None, Some(dom), note);
            // The local hypothesis compares with N_ab(1 + B_ab); the realized
            // margin is still measured against N_ab.
            cert.threshold = threshold;
            if !(w0 < -threshold) {
                cert.verdict = Verdict::ThresholdNotMet;
                cert.t_ub = f64::INFINITY;
            } else if let Some(d) = &cert.domain {
                if cert.t_ub > d.t_ab_lower && !d.is_isentropic_window() {
                    cert.note
                        .push_str("T_ub exceeds the window lifetime bound. ");
                }
            }
            Ok(cert)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    mode: CertificateMode,
    w0: f64,
    w0_family: Family,
    w0_x: f64,
    n: f64,
    envelope: A2Envelope,
    linfty: Option<LinftyBounds>,
    domain: Option<DomainOfDetermination>,
    note: String,
) -> BlowupCertificate {
    let margin = if n > 0.0 {
        -w0 / n - 1.0
    } else {
        f64::INFINITY
    };
    let met = w0 < -n && w0 < 0.0;
    let factor = if met { margin_factor(margin) } else { 0.0 };
    let t_ub = if met {
        blowup_time_upper(&envelope, factor, w0)
    } else {
        f64::INFINITY
    };
    let verdict = if met && t_ub.is_finite() {
        Verdict::CertifiedBlowup
    } else {
        Verdict::ThresholdNotMet
    };
    let mut note = note;
    if verdict == Verdict::ThresholdNotMet && matches!(mode, CertificateMode::Isentropic) {
        note.push_str("s_x >= 0 and r_x >= 0 everywhere: global smooth solution expected. ");
    }
    BlowupCertificate {
        mode,
        w0,
        w0_family,
        w0_x,
        threshold: n,
        margin,
        factor,
        envelope,
        t_ub,
        bracket: None,
        verdict,
        linfty,
        domain,
        note,
    }
}

fn most_negative(snap: &FieldSnapshot, nodes: std::ops::Range<usize>) -> (f64, Family, f64) {
    let mut best = (f64::INFINITY, Family::Plus, snap.grid.x_min);
    for i in nodes {
        if snap.y[i] < best.0 {
            best = (snap.y[i], Family::Plus, snap.grid.x(i));
        }
        if snap.q[i] < best.0 {
            best = (snap.q[i], Family::Minus, snap.grid.x(i));
        }
    }
    best
}

/// Attach the run's outcome and settle the verdict.
///
/// A certified blowup is violated when the run stays smooth past
/// `T_ub + 2%·T_ub`, or its bracket ends later than
/// `T_ub + width + 2%·T_ub`.
pub fn reconcile(cert: &BlowupCertificate, run: &RunResult) -> BlowupCertificate {
    let mut out = cert.clone();
    out.bracket = run.bracket();
    if cert.verdict != Verdict::CertifiedBlowup {
        if out.bracket.is_some() {
            out.note
                .push_str("run detected blowup although the threshold was not met. ");
        }
        return out;
    }
    let slack = BRACKET_TOLERANCE * cert.t_ub;
    match &run.termination {
        Termination::BlowupDetected { t_lo, t_hi } => {
            if *t_hi > cert.t_ub + (t_hi - t_lo) + slack {
                out.verdict = Verdict::BoundViolated;
                out.note.push_str("numeric bracket ends after T_ub. ");
            }
        }
        Termination::HorizonReached => {
            if run.final_time() > cert.t_ub + slack {
                out.verdict = Verdict::BoundViolated;
                out.note.push_str("run stayed smooth past T_ub. ");
            } else {
                out.note
                    .push_str("horizon ended before T_ub; inconclusive. ");
            }
        }
        Termination::StepFailure { t, reason } => {
            out.note
                .push_str(&format!("step failure at t = {t}: {reason}. "));
        }
    }
    out
}
