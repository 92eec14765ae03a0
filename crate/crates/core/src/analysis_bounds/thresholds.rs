use super::density::full_density_constant;
use super::envelope::{a2_floor, a2_prefactor, A2Envelope};
use crate::error::{Error, Result};
use crate::fields_init::{entropy_diagnostics, EntropyDiagnostics, FieldSnapshot};
use crate::gas_thermo::GasModel;

/// Uniform bounds on the Riemann variables implied by finite entropy variation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinftyBounds {
    pub n1: f64,
    pub n2: f64,
    /// `((N₁+N₂)/2) M_L^{1/(2γ)−1}`.
    pub e_u: f64,
    pub s_bound: f64,
    pub r_bound: f64,
    pub u_bound: f64,
}

/// `N₁ = M_s + V̄M_r + V̄(V̄M_s + V̄²M_r)e^{V̄²}` with `V̄ = V/(2γ)`, `N₂` symmetric.
pub fn linfty_bounds(
    gas: &GasModel,
    m_s: f64,
    m_r: f64,
    v: f64,
    m_l: f64,
    m_u: f64,
) -> LinftyBounds {
    let g = gas.gamma();
    let vb = v / (2.0 * g);
    let e = (vb * vb).exp();
    let n1 = m_s + vb * m_r + vb * (vb * m_s + vb * vb * m_r) * e;
    let n2 = m_r + vb * m_s + vb * (vb * m_r + vb * vb * m_s) * e;
    let scale_u = m_u.powf(1.0 / (2.0 * g));
    LinftyBounds {
        n1,
        n2,
        e_u: 0.5 * (n1 + n2) * m_l.powf(1.0 / (2.0 * g) - 1.0),
        s_bound: n1 * scale_u,
        r_bound: n2 * scale_u,
        u_bound: 0.5 * (n1 + n2) * scale_u,
    }
}

/// `m` bound that makes `m^{-3(3−γ)/(2(3γ−1))}` largest: `M_L` below `γ = 3`, `M_U` above.
fn ratio_m_bound(gamma: f64, m_l: f64, m_u: f64) -> f64 {
    if gamma < 3.0 {
        m_l
    } else {
        m_u
    }
}

/// `√(coef·M₃)·E^{(3γ−1)/(2(γ−1))}·M^{-3(3−γ)/(2(3γ−1))}`, the threshold dominating `√(a₀/a₂)`.
pub fn threshold_from(gas: &GasModel, m3: f64, e_u: f64, m_l: f64, m_u: f64) -> f64 {
    let g = gas.gamma();
    (gas.ratio_coefficient() * m3).sqrt()
        * e_u.powf((3.0 * g - 1.0) / (2.0 * (g - 1.0)))
        * ratio_m_bound(g, m_l, m_u).powf(-gas.m_exponent())
}

pub fn global_threshold_n(gas: &GasModel, diag: &EntropyDiagnostics, e_u: f64) -> f64 {
    threshold_from(gas, diag.m3, e_u, diag.m_l, diag.m_u)
}

/// `max √(max(0, a₀/a₂))` over the nodes of a snapshot (or a window of it).
pub fn sharp_threshold(gas: &GasModel, snap: &FieldSnapshot, nodes: std::ops::Range<usize>) -> f64 {
    let ent = &snap.entropy;
    nodes
        .map(|i| gas.a0_over_a2(snap.eta[i], ent.m[i], ent.m_x[i], ent.m_xx[i]))
        .fold(0.0f64, |a, r| a.max(r.max(0.0).sqrt()))
}

/// Constants of the local blowup criterion on `[alpha, beta]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainOfDetermination {
    pub alpha: f64,
    pub beta: f64,
    pub diagnostics: EntropyDiagnostics,
    pub v_ab: f64,
    pub n1_ab: f64,
    pub n2_ab: f64,
    pub etilde_u: f64,
    /// Lower bound on the time at which the window's bounding characteristics meet.
    pub t_ab_lower: f64,
    pub n_ab: f64,
    pub y_tilde: f64,
    pub q_tilde: f64,
    /// `K̃₆` (0 for `γ ≥ 3`).
    pub k6: f64,
    pub k7: f64,
    pub k8: f64,
    pub k9: f64,
    pub k10: f64,
    /// `sup τ₀` over the window; reference volume of the `a₂` envelope.
    pub tau_ref: f64,
    /// Infinite for an isentropic window (`N_ab = 0`).
    pub b_ab: f64,
}

impl DomainOfDetermination {
    pub fn is_isentropic_window(&self) -> bool {
        self.n_ab == 0.0
    }

    pub fn threshold(&self) -> f64 {
        if self.is_isentropic_window() {
            0.0
        } else {
            self.n_ab * (1.0 + self.b_ab)
        }
    }

    /// Right-hand side of the margin condition `B(2+B)/(1+B) ≥ rhs`.
    pub fn margin_rhs(&self, gamma: f64) -> f64 {
        if gamma >= 3.0 {
            1.0 / (self.k8 * self.n_ab * self.t_ab_lower)
        } else {
            1.0 / (self.k10 / self.k9 * self.n_ab * (self.k9 * self.t_ab_lower).ln_1p())
        }
    }

    pub fn margin_feasible(&self, gamma: f64, b: f64) -> bool {
        b * (2.0 + b) / (1.0 + b) >= self.margin_rhs(gamma)
    }

    pub fn envelope(&self, gamma: f64) -> A2Envelope {
        if gamma >= 3.0 {
            A2Envelope::Constant { floor: self.k8 }
        } else {
            A2Envelope::Decaying {
                k10: self.k10,
                k9: self.k9,
            }
        }
    }
}

/// All window constants from initial data.
///
/// The characteristic speed bound includes `K_c`:
/// `c = K_c m η^{(γ+1)/(γ−1)} ≤ K_c M_U Ẽ_U^{(γ+1)/(γ−1)}`.
pub fn local_domain(
    gas: &GasModel,
    snap: &FieldSnapshot,
    alpha: f64,
    beta: f64,
) -> Result<DomainOfDetermination> {
    let dx = snap.grid.dx();
    if !(beta - alpha >= 4.0 * dx) {
        return Err(Error::DegenerateWindow {
            alpha,
            beta,
            reason: "window must span at least four cells",
        });
    }
    let diag = entropy_diagnostics(gas, snap, Some((alpha, beta)))?;
    let g = gas.gamma();
    let lin = linfty_bounds(gas, diag.m_s, diag.m_r, diag.v, diag.m_l, diag.m_u);
    let etilde = lin.e_u;
    let c_max = gas.constants().k_c * diag.m_u * etilde.powf((g + 1.0) / (g - 1.0));
    let t_ab = (beta - alpha) / (2.0 * c_max);
    let n_ab = threshold_from(gas, diag.m3, etilde, diag.m_l, diag.m_u);
    let nodes = diag.nodes.clone();
    let y_sup = nodes
        .clone()
        .map(|i| snap.y[i])
        .fold(f64::NEG_INFINITY, f64::max);
    let q_sup = nodes
        .clone()
        .map(|i| snap.q[i])
        .fold(f64::NEG_INFINITY, f64::max);
    let y_tilde = n_ab.max(y_sup);
    let q_tilde = n_ab.max(q_sup);
    let tau_ref = nodes.clone().map(|i| snap.tau[i]).fold(0.0, f64::max);
    let (k6, k7, k8, k9, k10);
    if g < 3.0 {
        let beta_exp = (3.0 - g) / 4.0;
        k6 = full_density_constant(gas, diag.m_u)?;
        k7 = a2_prefactor(gas, diag.m_l);
        k8 = 0.0;
        let scale = tau_ref.powf(-beta_exp);
        k9 = k6 * (y_tilde + q_tilde) * scale;
        k10 = k7 * scale;
    } else {
        k6 = 0.0;
        k7 = 0.0;
        k8 = a2_floor(gas, diag.m_u, etilde);
        k9 = 0.0;
        k10 = 0.0;
    }
    let mut dom = DomainOfDetermination {
        alpha,
        beta,
        v_ab: diag.v,
        n1_ab: lin.n1,
        n2_ab: lin.n2,
        etilde_u: etilde,
        t_ab_lower: t_ab,
        n_ab,
        y_tilde,
        q_tilde,
        k6,
        k7,
        k8,
        k9,
        k10,
        tau_ref,
        b_ab: f64::INFINITY,
        diagnostics: diag,
    };
    if n_ab > 0.0 {
        // Equality choice: B equals the margin right-hand side.
        dom.b_ab = dom.margin_rhs(g);
    }
    Ok(dom)
}
