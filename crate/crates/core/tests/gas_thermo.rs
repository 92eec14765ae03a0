use approx::assert_relative_eq;
use eulerlab_core::gas_thermo::{critical_theta, entropy_curvature, GasModel, GeneralPressureLaw};
use eulerlab_core::Error;
use proptest::prelude::*;

/// Closed forms evaluated directly, independent of the library.
struct Oracle {
    k_tau: f64,
    k_p: f64,
    k_c: f64,
}

fn oracle(gamma: f64, k: f64) -> Oracle {
    let c = 2.0 * (k * gamma).sqrt() / (gamma - 1.0);
    let k_tau = c.powf(2.0 / (gamma - 1.0));
    Oracle {
        k_tau,
        k_p: k * k_tau.powf(-gamma),
        k_c: (k * gamma).sqrt() * k_tau.powf(-(gamma + 1.0) / 2.0),
    }
}

#[test]
fn constants_match_closed_forms() {
    let gas = GasModel::isentropic(5.0 / 3.0, 1.0).unwrap();
    let c = gas.constants();
    assert_relative_eq!(c.k_tau, 58.094_750_193_111_2, max_relative = 1e-12);
    assert_relative_eq!(c.k_c, 5.737_753_105_492_47e-3, max_relative = 1e-12);
    assert_relative_eq!(c.k_tau * c.k_c, 1.0 / 3.0, max_relative = 1e-12);
    let o = oracle(5.0 / 3.0, 1.0);
    assert_relative_eq!(c.k_p, o.k_p, max_relative = 1e-12);
}

#[test]
fn k_p_is_quarter_k_c_at_gamma_two() {
    let c = GasModel::isentropic(2.0, 1.0).unwrap().constants();
    assert_relative_eq!(c.k_p, c.k_c / 4.0, max_relative = 1e-12);
}

#[test]
fn invalid_gas_parameters_are_rejected() {
    assert!(matches!(
        GasModel::new(0.9, 1.0, 1.0),
        Err(Error::InvalidGas { .. })
    ));
    assert!(matches!(
        GasModel::new(1.4, 0.0, 1.0),
        Err(Error::InvalidGas { .. })
    ));
    assert!(matches!(
        GasModel::new(1.4, 1.0, -1.0),
        Err(Error::InvalidGas { .. })
    ));
    assert!(GasModel::new(f64::NAN, 1.0, 1.0).is_err());
    // K_tau = C^{2/(γ−1)} overflows f64 near γ = 1.
    assert!(matches!(
        GasModel::new(1.001, 1.0, 1.0),
        Err(Error::InvalidGas { name: "gamma", .. })
    ));
}

#[test]
fn sound_speed_examples() {
    let gas = GasModel::isentropic(5.0 / 3.0, 1.0).unwrap();
    assert_relative_eq!(
        gas.sound_speed(1.0, None).unwrap(),
        (5.0f64 / 3.0).sqrt(),
        max_relative = 1e-14
    );
    assert_relative_eq!(
        gas.sound_speed(1.0, None).unwrap(),
        1.290_994_4,
        max_relative = 1e-7
    );
    let full = GasModel::new(5.0 / 3.0, 1.0, 2.0).unwrap();
    assert_eq!(
        full.sound_speed(0.7, Some(0.0)).unwrap(),
        full.sound_speed(0.7, None).unwrap()
    );
    let unit = GasModel::isentropic(3.0, 1.0 / 3.0).unwrap();
    assert_relative_eq!(
        unit.sound_speed(1.0, None).unwrap(),
        1.0,
        max_relative = 1e-14
    );
    assert!(matches!(
        gas.sound_speed(0.0, None),
        Err(Error::NonPositiveTau(_))
    ));
    assert!(gas.sound_speed(-1.0, None).is_err());
}

#[test]
fn eta_and_riemann_examples() {
    let gas = GasModel::isentropic(5.0 / 3.0, 1.0).unwrap();
    let eta = gas.eta_from_tau(1.0).unwrap();
    assert_relative_eq!(eta, 3.872_983_346_207_417, max_relative = 1e-12);
    let k_tau = gas.constants().k_tau;
    let tau = 2.5;
    let eta = gas.eta_from_tau(tau).unwrap();
    assert_relative_eq!(
        k_tau * eta.powf(-2.0 / (5.0 / 3.0 - 1.0)),
        tau,
        max_relative = 1e-12
    );

    let st = gas.riemann_from_primitive(1.0, 0.0, 0.0).unwrap();
    assert_relative_eq!(st.s, 3.872_983_346_207_417, max_relative = 1e-12);
    assert_relative_eq!(st.r, -st.s, max_relative = 1e-15);
    assert_eq!(st.m, 1.0);
    assert!(matches!(
        gas.primitive_from_riemann(1.0, 1.0, 1.0),
        Err(Error::Vacuum { .. })
    ));
    assert!(gas.tau_from_eta(0.0).is_err());
}

#[test]
fn gradient_variable_examples() {
    let gas = GasModel::isentropic(5.0 / 3.0, 1.0).unwrap();
    let (y, q) = gas.gradient_vars(3.0, 1.0, 0.0, 0.0, 0.0);
    assert_eq!((y, q), (0.0, 0.0));
    let eta = 2.3;
    let k = gas.eta_exponent();
    let (y, q) = gas.gradient_vars(eta, 1.0, 0.0, 0.7, -0.4);
    assert_relative_eq!(y / 0.7, eta.powf(k), max_relative = 1e-14);
    assert_relative_eq!(q / -0.4, eta.powf(k), max_relative = 1e-14);
}

#[test]
fn stationary_gradient_closed_form() {
    // u = 0, p_x = 0 gives s_x = m_x η / γ and -q = y.
    let g = 1.4;
    let gas = GasModel::new(g, 1.0, 1.0).unwrap();
    let (m, m_x, eta) = (1.3, 0.25, 2.1);
    let s_x = m_x * eta / g;
    let (y, q) = gas.gradient_vars(eta, m, m_x, s_x, -s_x);
    let expected = (g - 1.0) / (g * (3.0 * g - 1.0))
        * m_x
        * m.powf(3.0 * (g - 3.0) / (2.0 * (3.0 * g - 1.0)))
        * eta.powf((3.0 * g - 1.0) / (2.0 * (g - 1.0)));
    assert_relative_eq!(y, expected, max_relative = 1e-12);
    assert_relative_eq!(-q, y, max_relative = 1e-12);
}

#[test]
fn isentropic_a2_example() {
    let gas = GasModel::isentropic(5.0 / 3.0, 1.0).unwrap();
    let eta = gas.eta_from_tau(1.0).unwrap();
    let c = gas.riccati_coeffs(eta, 1.0, 0.0, 0.0);
    assert_eq!(c.a0, 0.0);
    // K_c · 2 · η with K_c η = √(5/3)/ 58.09… · 3.87… = 2/90.
    assert_relative_eq!(c.a2, 2.0 / 45.0, max_relative = 1e-12);
}

#[test]
fn theta_values() {
    assert_relative_eq!(critical_theta(5.0 / 3.0), -0.7, max_relative = 1e-12);
    assert_relative_eq!(critical_theta(3.0), -1.0 / 3.0, max_relative = 1e-12);
}

#[test]
fn power_law_audits_reproduce_a_min() {
    for g in [1.2, 1.4, 5.0 / 3.0, 2.0, 3.0, 4.0] {
        let law = GeneralPressureLaw::power_law(1.0, g, 1e-3, 1e3).unwrap();
        let audit = law.audit();
        assert!(audit.monotone_ok && audit.convex_ok, "gamma {g}");
        let expected = ((3.0 - g) / (g + 1.0)).max(0.0);
        assert!(
            (audit.a_min.unwrap() - expected).abs() <= 1e-6,
            "gamma {g}: {:?}",
            audit.a_min
        );
        assert!(audit.integral_small_tau_divergent, "gamma {g}");
        assert!(audit.integral_large_tau_finite, "gamma {g}");
        assert!(audit.faults.is_empty());
    }
}

#[test]
fn two_term_law_audits_with_finite_a() {
    let law = GeneralPressureLaw::sum_of_powers(&[(1.0, 2.0), (1.0, 1.0)], 1e-3, 1e3).unwrap();
    let audit = law.audit();
    assert!(audit.monotone_ok && audit.convex_ok);
    let a = audit.a_min.expect("finite A");
    assert!(a.is_finite() && a >= 0.0);
    // A_min must make (5 + A) p''² − 4 p' p''' nonnegative on samples.
    for k in 0..200 {
        let tau = 1e-3 * 1e6f64.powf(k as f64 / 199.0);
        let lhs = (5.0 + a) * law.d2p(tau).powi(2) - 4.0 * law.dp(tau) * law.d3p(tau);
        assert!(lhs >= -1e-12 * law.d2p(tau).powi(2), "tau {tau}");
    }
}

#[test]
fn general_law_eta_and_a() {
    let law = GeneralPressureLaw::power_law(1.0, 2.0, 1e-3, 1e3).unwrap();
    assert_eq!(law.eta(1.0, 1.0).unwrap(), 0.0);
    for tau in [0.01f64, 0.2, 0.5, 0.9] {
        let exact = 2.0 * 2f64.sqrt() * (tau.powf(-0.5) - 1.0);
        assert_relative_eq!(law.eta(tau, 1.0).unwrap(), exact, max_relative = 1e-9);
    }
    assert_relative_eq!(
        law.coefficient_a(1.0).unwrap(),
        6.0 / (4.0 * 2f64.powf(1.25)),
        max_relative = 1e-12
    );
    assert_relative_eq!(
        law.coefficient_a(1.0).unwrap(),
        0.630_672_3,
        max_relative = 1e-7
    );

    let gas = GasModel::isentropic(5.0 / 3.0, 1.0).unwrap();
    let gl = GeneralPressureLaw::power_law(1.0, 5.0 / 3.0, 1e-3, 1e3).unwrap();
    for tau in [0.3, 1.0, 4.0] {
        assert_relative_eq!(
            gl.sound_speed(tau).unwrap(),
            gas.sound_speed(tau, None).unwrap(),
            max_relative = 1e-10
        );
        // a₂ = √K_c · a for the γ-law.
        let eta = gas.eta_from_tau(tau).unwrap();
        let a2 = gas.riccati_coeffs(eta, 1.0, 0.0, 0.0).a2;
        assert_relative_eq!(
            a2,
            gas.constants().k_c.sqrt() * gl.coefficient_a(tau).unwrap(),
            max_relative = 1e-10
        );
    }
}

#[test]
fn increasing_pressure_is_inadmissible() {
    let law = GeneralPressureLaw::sum_of_powers(&[(-1.0, 2.0)], 1e-2, 1e2).unwrap();
    assert!(law.sound_speed(1.0).is_err());
    assert!(!law.audit().monotone_ok);
}

fn gas_strategy() -> impl Strategy<Value = (f64, f64)> {
    (1.05f64..5.0, 0.01f64..100.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn constant_identities((g, k) in gas_strategy()) {
        let c = GasModel::isentropic(g, k).unwrap().constants();
        let o = oracle(g, k);
        prop_assert!((c.k_tau * c.k_c / ((g - 1.0) / 2.0) - 1.0).abs() < 1e-12);
        prop_assert!((c.k_p / ((g - 1.0) / (2.0 * g) * c.k_c) - 1.0).abs() < 1e-12);
        prop_assert!((c.k_tau / o.k_tau - 1.0).abs() < 1e-12);
        prop_assert!((c.k_c / o.k_c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eta_roundtrip((g, k) in gas_strategy(), lt in -3.0f64..3.0) {
        let gas = GasModel::isentropic(g, k).unwrap();
        let tau = 10f64.powf(lt);
        let back = gas.tau_from_eta(gas.eta_from_tau(tau).unwrap()).unwrap();
        prop_assert!((back / tau - 1.0).abs() < 1e-12);
    }

    /// `u` is drawn relative to `mη`: recovering `η = (s − r)/(2m)` loses
    /// about `|u|/(mη)` ulps, which no storage of `(r, s)` avoids.
    #[test]
    fn riemann_roundtrip((g, k) in gas_strategy(), lt in -3.0f64..3.0, xi in -10.0f64..10.0, s in -3.0f64..3.0) {
        let gas = GasModel::new(g, k, 1.3).unwrap();
        let tau = 10f64.powf(lt);
        let u = xi * gas.m_from_entropy(s) * gas.eta_from_tau(tau).unwrap();
        let st = gas.riemann_from_primitive(tau, u, s).unwrap();
        prop_assert!(st.s > st.r);
        let (t2, u2) = gas.primitive_from_riemann(st.r, st.s, st.m).unwrap();
        prop_assert!((t2 / tau - 1.0).abs() < 1e-12);
        prop_assert!((u2 - u).abs() <= 1e-12 * (u.abs() + st.s.abs()));
    }

    #[test]
    fn riccati_ratio_and_signs(g in 1.05f64..4.5, eta in 0.1f64..10.0, m in 0.2f64..5.0, m_x in -3.0f64..3.0, m_xx in -3.0f64..3.0) {
        let gas = GasModel::new(g, 1.0, 1.0).unwrap();
        let c = gas.riccati_coeffs(eta, m, m_x, m_xx);
        prop_assert!(c.a2 > 0.0);
        let ratio = gas.a0_over_a2(eta, m, m_x, m_xx);
        prop_assert!((c.a0 / c.a2 - ratio).abs() <= 1e-12 * ratio.abs().max(1e-300) + 1e-300);
        let curv = m * m_xx - (3.0 * g + 1.0) / (3.0 * g - 1.0) * m_x * m_x;
        prop_assert_eq!(c.a0.signum(), if curv == 0.0 { c.a0.signum() } else { curv.signum() });
        prop_assert!((entropy_curvature(g, m, m_x, m_xx) - curv).abs() <= 1e-12 * curv.abs().max(1.0));
    }
}
