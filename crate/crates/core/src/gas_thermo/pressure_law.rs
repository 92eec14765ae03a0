use std::cell::Cell;
use std::fmt;

use crate::error::{Error, Result};

/// Ceiling on the reported `A_min`; larger values are reported as not found.
pub const A_CAP: f64 = 1e6;

const DEFAULT_SAMPLES: usize = 4096;
const REL_TOL: f64 = 1e-10;
/// Slope (per decade) of the partial-integral increments separating decay from growth.
const DECAY_SLOPE: f64 = -0.05;

type Eval = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Pressure `p(τ)` with its first three derivatives, audited on `[tau_lo, tau_hi]`.
pub struct GeneralPressureLaw {
    p: Eval,
    dp: Eval,
    d2p: Eval,
    d3p: Eval,
    pub tau_lo: f64,
    pub tau_hi: f64,
    pub samples: usize,
}

impl fmt::Debug for GeneralPressureLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneralPressureLaw")
            .field("tau_lo", &self.tau_lo)
            .field("tau_hi", &self.tau_hi)
            .field("samples", &self.samples)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleFault {
    pub tau: f64,
    pub quantity: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PressureAudit {
    pub monotone_ok: bool,
    pub convex_ok: bool,
    /// `(ε, ∫_ε^1 √(−p') dτ)` for ε = 1e-2 … 1e-8.
    pub small_tau_partials: Vec<(f64, f64)>,
    pub integral_small_tau_divergent: bool,
    /// `(U, ∫_1^U √(−p') dτ)` for U = 1e2 … 1e8.
    pub large_tau_partials: Vec<(f64, f64)>,
    pub integral_large_tau_finite: bool,
    /// Smallest admissible `A`, or `None` when it exceeds [`A_CAP`].
    pub a_min: Option<f64>,
    /// Sampled supremum of `4 p' p''' / p''² − 5`, before clipping at zero.
    pub a_raw_max: f64,
    pub faults: Vec<SampleFault>,
}

impl GeneralPressureLaw {
    pub fn new<P, D1, D2, D3>(
        p: P,
        dp: D1,
        d2p: D2,
        d3p: D3,
        tau_lo: f64,
        tau_hi: f64,
    ) -> Result<Self>
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        D1: Fn(f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64) -> f64 + Send + Sync + 'static,
        D3: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(tau_lo > 0.0 && tau_hi > tau_lo && tau_hi.is_finite()) {
            return Err(Error::Inadmissible {
                tau: tau_lo,
                reason: "audit window must satisfy 0 < tau_lo < tau_hi",
            });
        }
        Ok(Self {
            p: Box::new(p),
            dp: Box::new(dp),
            d2p: Box::new(d2p),
            d3p: Box::new(d3p),
            tau_lo,
            tau_hi,
            samples: DEFAULT_SAMPLES,
        })
    }

    /// `p = Σ cᵢ τ^{-eᵢ}`.
    pub fn sum_of_powers(terms: &[(f64, f64)], tau_lo: f64, tau_hi: f64) -> Result<Self> {
        let t0 = terms.to_vec();
        let t1 = terms.to_vec();
        let t2 = terms.to_vec();
        let t3 = terms.to_vec();
        Self::new(
            move |tau| t0.iter().map(|&(c, e)| c * tau.powf(-e)).sum(),
            move |tau| t1.iter().map(|&(c, e)| -c * e * tau.powf(-e - 1.0)).sum(),
            move |tau| {
                t2.iter()
                    .map(|&(c, e)| c * e * (e + 1.0) * tau.powf(-e - 2.0))
                    .sum()
            },
            move |tau| {
                t3.iter()
                    .map(|&(c, e)| -c * e * (e + 1.0) * (e + 2.0) * tau.powf(-e - 3.0))
                    .sum()
            },
            tau_lo,
            tau_hi,
        )
    }

    /// `p = K τ^{-γ}`.
    pub fn power_law(k: f64, gamma: f64, tau_lo: f64, tau_hi: f64) -> Result<Self> {
        Self::sum_of_powers(&[(k, gamma)], tau_lo, tau_hi)
    }

    pub fn p(&self, tau: f64) -> f64 {
        (self.p)(tau)
    }

    pub fn dp(&self, tau: f64) -> f64 {
        (self.dp)(tau)
    }

    pub fn d2p(&self, tau: f64) -> f64 {
        (self.d2p)(tau)
    }

    pub fn d3p(&self, tau: f64) -> f64 {
        (self.d3p)(tau)
    }

    /// `c = √(−p'(τ))`.
    pub fn sound_speed(&self, tau: f64) -> Result<f64> {
        check_tau(tau)?;
        let dp = self.dp(tau);
        if !(dp < 0.0) {
            return Err(Error::Inadmissible {
                tau,
                reason: "p' must be negative",
            });
        }
        Ok((-dp).sqrt())
    }

    /// `∫_τ^{τ_ref} √(−p'(σ)) dσ` to relative tolerance 1e-10.
    pub fn eta(&self, tau: f64, tau_ref: f64) -> Result<f64> {
        check_tau(tau)?;
        check_tau(tau_ref)?;
        if tau == tau_ref {
            return Ok(0.0);
        }
        let (lo, hi, sign) = if tau < tau_ref {
            (tau, tau_ref, 1.0)
        } else {
            (tau_ref, tau, -1.0)
        };
        Ok(sign * self.integrate_speed(lo, hi)?)
    }

    /// `a(τ) = p''/(4(−p')^{5/4})`.
    pub fn coefficient_a(&self, tau: f64) -> Result<f64> {
        let c = self.sound_speed(tau)?;
        let d2p = self.d2p(tau);
        if !(d2p > 0.0) {
            return Err(Error::Inadmissible {
                tau,
                reason: "p'' must be positive",
            });
        }
        Ok(d2p / (4.0 * c.powf(2.5)))
    }

    pub fn audit(&self) -> PressureAudit {
        let n = self.samples.max(2);
        let ratio = (self.tau_hi / self.tau_lo).ln();
        let mut faults = Vec::new();
        let mut monotone_ok = true;
        let mut convex_ok = true;
        let mut a_raw_max = f64::NEG_INFINITY;
        for i in 0..n {
            let tau = self.tau_lo * (ratio * i as f64 / (n - 1) as f64).exp();
            let (dp, d2p, d3p) = (self.dp(tau), self.d2p(tau), self.d3p(tau));
            let mut finite = true;
            for (v, name) in [(dp, "dp"), (d2p, "d2p"), (d3p, "d3p")] {
                if !v.is_finite() {
                    faults.push(SampleFault {
                        tau,
                        quantity: name,
                    });
                    finite = false;
                }
            }
            if !finite {
                continue;
            }
            monotone_ok &= dp < 0.0;
            convex_ok &= d2p > 0.0;
            if d2p != 0.0 {
                a_raw_max = a_raw_max.max(4.0 * dp * d3p / (d2p * d2p) - 5.0);
            }
        }
        let a_min = if a_raw_max.is_finite() {
            Some(a_raw_max.max(0.0)).filter(|a| *a <= A_CAP)
        } else {
            None
        };

        let small_eps: Vec<f64> = (2..=8).map(|k| 10f64.powi(-k)).collect();
        let small_tau_partials = self.partials(1.0, &small_eps);
        let large_upper: Vec<f64> = (2..=8).map(|k| 10f64.powi(k)).collect();
        let large_tau_partials = self.partials(1.0, &large_upper);

        PressureAudit {
            monotone_ok,
            convex_ok,
            integral_small_tau_divergent: !increments_decay(&small_tau_partials),
            integral_large_tau_finite: increments_decay(&large_tau_partials),
            small_tau_partials,
            large_tau_partials,
            a_min,
            a_raw_max,
            faults,
        }
    }

    /// Cumulative `|∫_anchor^{limit}|` for a sequence of limits moving away from the anchor.
    fn partials(&self, anchor: f64, limits: &[f64]) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(limits.len());
        let mut total = 0.0;
        let mut prev = anchor;
        for &limit in limits {
            let (lo, hi) = if limit < prev {
                (limit, prev)
            } else {
                (prev, limit)
            };
            // Decade pieces keep the double-exponential rule well scaled.
            let mut a = lo;
            while a < hi {
                let b = (a * 10.0).min(hi);
                total += self.integrate_speed(a, b).unwrap_or(f64::NAN);
                a = b;
            }
            out.push((limit, total));
            prev = limit;
        }
        out
    }

    fn integrate_speed(&self, lo: f64, hi: f64) -> Result<f64> {
        let bad = Cell::new(None);
        let f = |t: f64| {
            let dp = self.dp(t);
            if dp >= 0.0 || !dp.is_finite() {
                bad.set(Some(t));
                0.0
            } else {
                (-dp).sqrt()
            }
        };
        let scale = (hi - lo)
            * [lo, 0.5 * (lo + hi), hi]
                .iter()
                .map(|&t| f(t))
                .fold(0.0, f64::max);
        let coarse = quadrature::integrate(f, lo, hi, 1e-6 * scale.max(f64::MIN_POSITIVE));
        let target = REL_TOL * 1e-2 * coarse.integral.abs().max(f64::MIN_POSITIVE);
        let fine = quadrature::integrate(f, lo, hi, target);
        if let Some(tau) = bad.get() {
            return Err(Error::Inadmissible {
                tau,
                reason: "p' must be negative",
            });
        }
        Ok(fine.integral)
    }
}

/// Fits log(increment) against decade index; decay means the limit exists on the window.
fn increments_decay(partials: &[(f64, f64)]) -> bool {
    let mut pts = Vec::new();
    let mut prev = 0.0;
    for (k, &(_, v)) in partials.iter().enumerate() {
        let d = v - prev;
        prev = v;
        if k == 0 {
            continue;
        }
        if !(d.is_finite()) {
            return false;
        }
        if d <= 0.0 {
            // Increment below rounding: treat as converged.
            pts.push((k as f64, (f64::MIN_POSITIVE).ln()));
        } else {
            pts.push((k as f64, d.ln()));
        }
    }
    if pts.len() < 2 {
        return false;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx / std::f64::consts::LN_10 < DECAY_SLOPE
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveTau(tau))
    }
}
