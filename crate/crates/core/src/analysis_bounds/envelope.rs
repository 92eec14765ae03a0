use crate::fields_init::FieldSnapshot;
use crate::gas_thermo::GasModel;

/// Lower bound on `a₂` along any characteristic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum A2Envelope {
    /// `a₂ ≥ k10 / (1 + k9·t)`.
    Decaying { k10: f64, k9: f64 },
    /// `a₂ ≥ floor`.
    Constant { floor: f64 },
}

impl A2Envelope {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            A2Envelope::Decaying { k10, k9 } => k10 / (1.0 + k9 * t),
            A2Envelope::Constant { floor } => floor,
        }
    }

    /// `∫₀^T envelope dt`.
    pub fn integral(&self, t_end: f64) -> f64 {
        match *self {
            A2Envelope::Decaying { k10, k9 } if k9 > 0.0 => k10 / k9 * (k9 * t_end).ln_1p(),
            A2Envelope::Decaying { k10, .. } => k10 * t_end,
            A2Envelope::Constant { floor } => floor * t_end,
        }
    }
}

pub fn a2_lower_envelope(envelope: &A2Envelope, t: f64) -> f64 {
    envelope.value(t)
}

/// `ε(2+ε)/(1+ε)²`, tending to 1 as `ε → ∞`.
pub fn margin_factor(eps: f64) -> f64 {
    if eps.is_infinite() {
        1.0
    } else {
        eps * (2.0 + eps) / (1.0 + eps).powi(2)
    }
}

/// `a₂ = K_c((γ+1)/(2(γ−1))) m^{3(3−γ)/(2(3γ−1))} C^{(3−γ)/(2(γ−1))} τ^{-(3−γ)/4}`
/// evaluated with `m = m_bound`, `τ = 1`.
pub fn a2_prefactor(gas: &GasModel, m_bound: f64) -> f64 {
    let g = gas.gamma();
    gas.constants().k_c
        * gas.eta_exponent()
        * m_bound.powf(gas.m_exponent())
        * gas.eta_scale().powf((3.0 - g) / (2.0 * (g - 1.0)))
}

/// `K_c((γ+1)/(2(γ−1))) m_bound^{3(3−γ)/(2(3γ−1))} η_max^{(3−γ)/(2(γ−1))}`, the floor for `γ ≥ 3`.
pub fn a2_floor(gas: &GasModel, m_bound: f64, eta_max: f64) -> f64 {
    let g = gas.gamma();
    gas.constants().k_c
        * gas.eta_exponent()
        * m_bound.powf(gas.m_exponent())
        * eta_max.powf((3.0 - g) / (2.0 * (g - 1.0)))
}

/// Isentropic envelope.
///
/// For `γ < 3`, `K₁₀ = K₇ τ_max^{-β}` and `K₉ = K₀(Y+Q) τ_max^{-β}` with
/// `τ_max = sup τ₀`, since the density bound at a point involves `τ₀` there.
/// For `γ ≥ 3` the floor uses `η ≤ (sup s₀ − inf r₀)/2`.
pub fn isentropic_envelope(
    gas: &GasModel,
    initial: &FieldSnapshot,
    k0: Option<f64>,
    y_sum: f64,
) -> A2Envelope {
    let g = gas.gamma();
    if g < 3.0 {
        let beta = (3.0 - g) / 4.0;
        let tau_max = initial.tau.iter().copied().fold(0.0, f64::max);
        let scale = tau_max.powf(-beta);
        A2Envelope::Decaying {
            k10: a2_prefactor(gas, 1.0) * scale,
            k9: k0.unwrap_or(0.0) * y_sum * scale,
        }
    } else {
        let s_max = initial.s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let r_min = initial.r.iter().copied().fold(f64::INFINITY, f64::min);
        A2Envelope::Constant {
            floor: a2_floor(gas, 1.0, 0.5 * (s_max - r_min)),
        }
    }
}

/// Smallest `T` with `factor·∫₀^T envelope = −1/w0`; infinite when `w0 ≥ 0`
/// or `factor ≤ 0`.
pub fn blowup_time_upper(envelope: &A2Envelope, factor: f64, w0: f64) -> f64 {
    if !(w0 < 0.0) || !(factor > 0.0) {
        return f64::INFINITY;
    }
    let target = -1.0 / (factor * w0);
    match *envelope {
        A2Envelope::Decaying { k10, k9 } if k9 > 0.0 => (k9 * target / k10).exp_m1() / k9,
        A2Envelope::Decaying { k10, .. } => target / k10,
        A2Envelope::Constant { floor } => target / floor,
    }
}

/// Solves `integral(T) = target` for nondecreasing `integral` with
/// `integral(0) = 0`, by bracketing and bisection to relative `1e-10`.
pub fn invert_integral(integral: impl Fn(f64) -> f64, target: f64) -> f64 {
    if target <= 0.0 {
        return 0.0;
    }
    let mut hi = 1.0;
    while integral(hi) < target {
        hi *= 2.0;
        if !hi.is_finite() || hi > 1e300 {
            return f64::INFINITY;
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if integral(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
