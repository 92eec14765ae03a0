//! Polytropic gas relations in Lagrangian form.
//!
//! The isentropic gas is the special case `m ≡ 1`, `m_x ≡ 0` of the full
//! (entropy-carrying) relations, so every function here takes `m` and its
//! derivatives explicitly and the isentropic caller simply passes `1, 0, 0`.

mod pressure_law;

pub use pressure_law::{GeneralPressureLaw, PressureAudit, SampleFault, A_CAP};

use crate::error::{Error, Result};

/// `p = K e^{S/c_v} τ^{-γ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    gamma: f64,
    k: f64,
    c_v: f64,
    consts: ThermoConstants,
}

/// Scale constants relating τ, p and c to η.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoConstants {
    pub k_tau: f64,
    pub k_p: f64,
    pub k_c: f64,
}

/// Riemann variables together with the entropy factor `m = e^{S/(2c_v)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannState {
    pub r: f64,
    pub s: f64,
    pub m: f64,
}

/// Coefficients of `∂₊y = a₀ − a₂y²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiCoeffs {
    pub a0: f64,
    pub a2: f64,
}

impl GasModel {
    pub fn new(gamma: f64, k: f64, c_v: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::InvalidGas {
                name: "gamma",
                value: gamma,
                reason: "must exceed 1",
            });
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidGas {
                name: "K",
                value: k,
                reason: "must be positive",
            });
        }
        if !(c_v.is_finite() && c_v > 0.0) {
            return Err(Error::InvalidGas {
                name: "c_v",
                value: c_v,
                reason: "must be positive",
            });
        }
        let consts = derive_constants(gamma, k);
        if ![consts.k_tau, consts.k_p, consts.k_c]
            .iter()
            .all(|v| v.is_normal())
        {
            return Err(Error::InvalidGas {
                name: "gamma",
                value: gamma,
                reason:
                    "scale constants K_tau, K_p, K_c are not representable in f64 this close to 1",
            });
        }
        Ok(Self {
            gamma,
            k,
            c_v,
            consts,
        })
    }

    /// Isentropic gas with `c_v = 1` (unused when `S ≡ 0`).
    pub fn isentropic(gamma: f64, k: f64) -> Result<Self> {
        Self::new(gamma, k, 1.0)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn c_v(&self) -> f64 {
        self.c_v
    }

    pub fn constants(&self) -> ThermoConstants {
        self.consts
    }

    /// `C = 2√(Kγ)/(γ−1)`, the factor in `η = C τ^{-(γ−1)/2}`.
    pub fn eta_scale(&self) -> f64 {
        2.0 * (self.k * self.gamma).sqrt() / (self.gamma - 1.0)
    }

    /// Exponent `3(3−γ)/(2(3γ−1))` carried by `m` in `y`, `q`, `a₀`, `a₂`.
    pub fn m_exponent(&self) -> f64 {
        let g = self.gamma;
        3.0 * (3.0 - g) / (2.0 * (3.0 * g - 1.0))
    }

    /// Exponent `(γ+1)/(2(γ−1))` carried by `η` in `y`, `q`.
    pub fn eta_exponent(&self) -> f64 {
        let g = self.gamma;
        (g + 1.0) / (2.0 * (g - 1.0))
    }

    pub fn m_from_entropy(&self, entropy: f64) -> f64 {
        (entropy / (2.0 * self.c_v)).exp()
    }

    pub fn pressure(&self, tau: f64, entropy: f64) -> Result<f64> {
        check_tau(tau)?;
        Ok(self.k * (entropy / self.c_v).exp() * tau.powf(-self.gamma))
    }

    /// `c = √(Kγ) τ^{-(γ+1)/2} e^{S/(2c_v)}`; `None` means isentropic.
    pub fn sound_speed(&self, tau: f64, entropy: Option<f64>) -> Result<f64> {
        check_tau(tau)?;
        let m = entropy.map_or(1.0, |s| self.m_from_entropy(s));
        Ok((self.k * self.gamma).sqrt() * tau.powf(-(self.gamma + 1.0) / 2.0) * m)
    }

    /// `c = K_c m η^{(γ+1)/(γ−1)}`; avoids a round trip through τ.
    pub fn sound_speed_from_eta(&self, eta: f64, m: f64) -> f64 {
        self.consts.k_c * m * eta.powf((self.gamma + 1.0) / (self.gamma - 1.0))
    }

    pub fn eta_from_tau(&self, tau: f64) -> Result<f64> {
        check_tau(tau)?;
        Ok(self.eta_scale() * tau.powf(-(self.gamma - 1.0) / 2.0))
    }

    pub fn tau_from_eta(&self, eta: f64) -> Result<f64> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::NonPositiveEta(eta));
        }
        Ok(self.consts.k_tau * eta.powf(-2.0 / (self.gamma - 1.0)))
    }

    pub fn riemann_from_primitive(&self, tau: f64, u: f64, entropy: f64) -> Result<RiemannState> {
        let eta = self.eta_from_tau(tau)?;
        let m = self.m_from_entropy(entropy);
        Ok(RiemannState {
            r: u - m * eta,
            s: u + m * eta,
            m,
        })
    }

    /// Returns `(τ, u)`.
    pub fn primitive_from_riemann(&self, r: f64, s: f64, m: f64) -> Result<(f64, f64)> {
        if !(s > r) || !(m > 0.0) {
            return Err(Error::Vacuum { r, s });
        }
        let eta = (s - r) / (2.0 * m);
        Ok((self.tau_from_eta(eta)?, 0.5 * (s + r)))
    }

    /// Weighted gradients `(y, q)` of the Riemann variables.
    pub fn gradient_vars(&self, eta: f64, m: f64, m_x: f64, s_x: f64, r_x: f64) -> (f64, f64) {
        let weight = m.powf(-self.m_exponent()) * eta.powf(self.eta_exponent());
        let shift = 2.0 / (3.0 * self.gamma - 1.0) * m_x * eta;
        (weight * (s_x - shift), weight * (r_x + shift))
    }

    pub fn riccati_coeffs(&self, eta: f64, m: f64, m_x: f64, m_xx: f64) -> RiccatiCoeffs {
        let g = self.gamma;
        let kc = self.consts.k_c;
        let a = self.m_exponent();
        let k = self.eta_exponent();
        let bracket = (g - 1.0) / (3.0 * g - 1.0) * m * m_xx
            - (3.0 * g + 1.0) * (g - 1.0) / (3.0 * g - 1.0).powi(2) * m_x * m_x;
        let a0 = kc / g * bracket * m.powf(-a) * eta.powf(3.0 * k + 1.0);
        let a2 = kc * k * m.powf(a) * eta.powf((3.0 - g) / (2.0 * (g - 1.0)));
        RiccatiCoeffs { a0, a2 }
    }

    /// `a₀/a₂` from the reduced closed form, independent of [`Self::riccati_coeffs`].
    pub fn a0_over_a2(&self, eta: f64, m: f64, m_x: f64, m_xx: f64) -> f64 {
        let g = self.gamma;
        self.ratio_coefficient()
            * entropy_curvature(g, m, m_x, m_xx)
            * eta.powf((3.0 * g - 1.0) / (g - 1.0))
            * m.powf(-3.0 * (3.0 - g) / (3.0 * g - 1.0))
    }

    /// `2(γ−1)²/(γ(γ+1)(3γ−1))`.
    pub fn ratio_coefficient(&self) -> f64 {
        let g = self.gamma;
        2.0 * (g - 1.0).powi(2) / (g * (g + 1.0) * (3.0 * g - 1.0))
    }

    /// Entropy source of `∂₊s` and `∂₋r`: `(c m_x/(2γm))(s − r) = c m_x η/γ`.
    pub fn transport_source(&self, c: f64, m_x: f64, eta: f64) -> f64 {
        c * m_x * eta / self.gamma
    }
}

/// `m m_xx − ((3γ+1)/(3γ−1)) m_x²`, the sign-carrying factor of `a₀`.
pub fn entropy_curvature(gamma: f64, m: f64, m_x: f64, m_xx: f64) -> f64 {
    m * m_xx - (3.0 * gamma + 1.0) / (3.0 * gamma - 1.0) * m_x * m_x
}

fn derive_constants(gamma: f64, k: f64) -> ThermoConstants {
    let c = 2.0 * (k * gamma).sqrt() / (gamma - 1.0);
    let k_tau = c.powf(2.0 / (gamma - 1.0));
    let k_p = k * k_tau.powf(-gamma);
    let k_c = (k * gamma).sqrt() * k_tau.powf(-(gamma + 1.0) / 2.0);
    ThermoConstants { k_tau, k_p, k_c }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveTau(tau))
    }
}

/// Exponent `θ` for which `m^θ` affine in `x` saturates `y² = a₀/a₂`.
pub fn critical_theta(gamma: f64) -> f64 {
    1.0 - (6.0 * gamma * gamma + 3.0 * gamma + 1.0) / (2.0 * gamma * (3.0 * gamma - 1.0))
}
