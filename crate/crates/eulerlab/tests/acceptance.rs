//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use eulerlab_core::analysis_bounds::{
    certify, max_tau_discrepancy, reconcile, tail_linear_fit, CertificateMode, DensityBoundParams,
    DensityMonitor, DensityTrack, Verdict, BRACKET_TOLERANCE,
};
use eulerlab_core::characteristics::{riccati_along, CharPath, Family, PathTracer};
use eulerlab_core::evolution::{run_observed, RunResult, SolverConfig, StepObserver, Termination};
use eulerlab_core::fields_init::{
    critical_family, entropy_diagnostics, gradient_budget, sample_initial, stationary_solution,
    Boundary, FieldSnapshot, Grid1D,
};
use eulerlab_core::gas_thermo::{critical_theta, GasModel, GeneralPressureLaw};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self { pass, detail }
    }
}

/// Density-bound record from one monitored run, with its half-resolution companion.
struct DensityCase {
    name: String,
    track: DensityTrack,
    fine: Vec<eulerlab_core::evolution::StepMonitor>,
    coarse: Vec<eulerlab_core::evolution::StepMonitor>,
}

fn gas(gamma: f64) -> GasModel {
    GasModel::new(gamma, 1.0, 1.0).unwrap()
}

fn grid(lo: f64, hi: f64, n: usize, b: Boundary) -> Grid1D {
    Grid1D::new(lo, hi, n, b).unwrap()
}

fn solver(horizon: f64, threshold: f64) -> SolverConfig {
    SolverConfig {
        horizon,
        critical_threshold: threshold,
        ..SolverConfig::default()
    }
}

fn isentropic_params(gas: &GasModel, snap: &FieldSnapshot) -> DensityBoundParams {
    DensityBoundParams::isentropic(gas, snap, &gradient_budget(snap, 0.0)).unwrap()
}

/// Full-Euler density bound and the global threshold used for the run budget.
fn full_params(gas: &GasModel, snap: &FieldSnapshot) -> (DensityBoundParams, f64) {
    let n = certify(gas, snap, CertificateMode::FullGlobal)
        .unwrap()
        .threshold;
    let m_u = entropy_diagnostics(gas, snap, None).unwrap().m_u;
    (
        DensityBoundParams::full(gas, snap, &gradient_budget(snap, n), m_u).unwrap(),
        n,
    )
}

/// Run with paths and a density monitor attached.
fn traced(
    gas: &GasModel,
    snap: &FieldSnapshot,
    cfg: &SolverConfig,
    seeds: &[(f64, Family)],
    density: Option<DensityBoundParams>,
) -> (RunResult, Vec<CharPath>, Option<DensityTrack>) {
    let mut tracer = PathTracer::new(seeds, cfg.interpolation);
    let mut monitor = density.map(DensityMonitor::new);
    let run = match monitor.as_mut() {
        Some(m) => run_observed(
            gas,
            snap,
            cfg,
            &mut [&mut tracer, m as &mut dyn StepObserver],
        ),
        None => run_observed(gas, snap, cfg, &mut [&mut tracer]),
    }
    .unwrap();
    (
        run,
        tracer.into_paths(),
        monitor.map(DensityMonitor::into_track),
    )
}

fn both_families(xs: &[f64]) -> Vec<(f64, Family)> {
    xs.iter()
        .flat_map(|&x| [(x, Family::Plus), (x, Family::Minus)])
        .collect()
}

fn orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

// 1. Constant identities on random gases.

/// Natural logs of `K_τ`, `K_p`, `K_c` from the closed forms.
fn log_constants(g: f64, k: f64) -> [f64; 3] {
    let ln_c = (2.0 * (k * g).sqrt() / (g - 1.0)).ln();
    let ln_tau = 2.0 / (g - 1.0) * ln_c;
    [
        ln_tau,
        k.ln() - g * ln_tau,
        0.5 * (k * g).ln() - 0.5 * (g + 1.0) * ln_tau,
    ]
}

fn c1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (lo, hi) = (f64::MIN_POSITIVE.ln(), f64::MAX.ln());
    let (mut accepted, mut rejected, mut worst) = (0, 0, 0.0f64);
    let mut ok = true;
    for _ in 0..200 {
        let g = 1.0 + rng.gen_range(f64::EPSILON..=4.0);
        let k = 10f64.powf(rng.gen_range(-2.0..2.0));
        match GasModel::isentropic(g, k) {
            Ok(gas) => {
                accepted += 1;
                let c = gas.constants();
                let e1 = (c.k_tau * c.k_c / ((g - 1.0) / 2.0) - 1.0).abs();
                let e2 = (c.k_p / ((g - 1.0) / (2.0 * g) * c.k_c) - 1.0).abs();
                worst = worst.max(e1).max(e2);
            }
            Err(_) => {
                rejected += 1;
                ok &= log_constants(g, k).iter().any(|l| !(lo..hi).contains(l));
            }
        }
    }
    ok &= worst <= 1e-12;
    Outcome::new(
        ok,
        format!("{accepted} gases, worst relative error {worst:.2e}; {rejected} rejected for f64 overflow"),
    )
}

// 2. Transform roundtrips.

fn c2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut e_eta, mut e_tau, mut e_u) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let g = rng.gen_range(1.05..5.0);
        let gas = GasModel::new(
            g,
            10f64.powf(rng.gen_range(-2.0..2.0)),
            rng.gen_range(0.5..2.0),
        )
        .unwrap();
        let tau = 10f64.powf(rng.gen_range(-3.0..3.0));
        let s = rng.gen_range(-3.0..3.0);
        let eta = gas.eta_from_tau(tau).unwrap();
        e_eta = e_eta.max((gas.tau_from_eta(eta).unwrap() / tau - 1.0).abs());
        let u = rng.gen_range(-10.0..10.0) * gas.m_from_entropy(s) * eta;
        let st = gas.riemann_from_primitive(tau, u, s).unwrap();
        let (t2, u2) = gas.primitive_from_riemann(st.r, st.s, st.m).unwrap();
        e_tau = e_tau.max((t2 / tau - 1.0).abs());
        e_u = e_u.max((u2 - u).abs() / (u.abs() + st.s.abs()));
    }
    let worst = e_eta.max(e_tau).max(e_u);
    Outcome::new(
        worst <= 1e-12,
        format!("tau<->eta {e_eta:.2e}, tau {e_tau:.2e}, u {e_u:.2e} over 10^4 states"),
    )
}

// 3. Invariant transport order (+ density cases).

fn c3() -> (Outcome, Vec<DensityCase>) {
    let g = gas(5.0 / 3.0);
    let seeds = both_families(&[-2.0, -1.0, 0.0, 1.0, 2.0]);
    let mut drifts = Vec::new();
    let mut runs: Vec<(usize, RunResult, DensityTrack)> = Vec::new();
    for n in [512, 1024, 2048, 4096] {
        let gr = grid(-10.0, 10.0, n, Boundary::ConstantExtension);
        let (snap, _) =
            sample_initial(&g, &gr, &|_| 1.0, &|x: f64| 0.2 * (x / 2.0).tanh(), &|_| {
                0.0
            })
            .unwrap();
        let params = isentropic_params(&g, &snap);
        let (run, paths, track) = traced(&g, &snap, &solver(2.0, 0.0), &seeds, Some(params));
        let drift = paths
            .iter()
            .flat_map(|p| {
                let i0 = p.samples[0].invariant;
                p.samples.iter().map(move |s| (s.invariant - i0).abs())
            })
            .fold(0.0, f64::max);
        drifts.push(drift);
        runs.push((n, run, track.unwrap()));
    }
    let ord = orders(&drifts);
    let pass = ord.iter().all(|&o| o >= 1.8);
    let mut cases = Vec::new();
    for k in 1..runs.len() {
        cases.push(DensityCase {
            name: format!("transport n={}", runs[k].0),
            track: runs[k].2.clone(),
            fine: runs[k].1.monitors.clone(),
            coarse: runs[k - 1].1.monitors.clone(),
        });
    }
    let detail = format!("drifts {}; orders {}", sci(&drifts), fixed(&ord));
    (Outcome::new(pass, detail), cases)
}

fn sci(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", items.join(", "))
}

fn fixed(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.2}")).collect();
    format!("[{}]", items.join(", "))
}

// 4 and 5. Sine data: blowup bracket under T_ub, and the Riccati cross-check.

fn sine_snapshot(g: &GasModel, n: usize) -> FieldSnapshot {
    let gr = grid(0.0, 2.0 * PI, n, Boundary::Periodic);
    sample_initial(g, &gr, &|_| 1.0, &|x: f64| -x.sin(), &|_| 0.0)
        .unwrap()
        .0
}

fn c5() -> (Outcome, Option<CharPath>, Vec<DensityCase>) {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut path53 = None;
    let mut cases = Vec::new();
    for gamma in [5.0 / 3.0, 2.0, 2.5] {
        let g = gas(gamma);
        let snap = sine_snapshot(&g, 4096);
        let cert = certify(&g, &snap, CertificateMode::Isentropic).unwrap();
        let cfg = solver(2.0 * cert.t_ub, 0.0);
        let (run, mut paths, track) = traced(
            &g,
            &snap,
            &cfg,
            &[(0.0, Family::Plus)],
            Some(isentropic_params(&g, &snap)),
        );
        let rec = reconcile(&cert, &run);
        let ok = match run.bracket() {
            Some((lo, hi)) => {
                parts.push(format!(
                    "g={gamma:.3}: [{lo:.4}, {hi:.4}] vs T_ub {:.4}",
                    cert.t_ub
                ));
                hi <= cert.t_ub + (hi - lo) + BRACKET_TOLERANCE * cert.t_ub
            }
            None => {
                parts.push(format!(
                    "g={gamma:.3}: no blowup before {:.3}",
                    run.final_time()
                ));
                false
            }
        };
        pass &= ok
            && cert.verdict == Verdict::CertifiedBlowup
            && rec.verdict == Verdict::CertifiedBlowup;
        let coarse = traced(&g, &sine_snapshot(&g, 2048), &cfg, &[], None).0;
        cases.push(DensityCase {
            name: format!("sine gamma={gamma:.3}"),
            track: track.unwrap(),
            fine: run.monitors,
            coarse: coarse.monitors,
        });
        if gamma == 5.0 / 3.0 {
            path53 = paths.pop();
        }
    }
    (Outcome::new(pass, parts.join("; ")), path53, cases)
}

fn c4(path: Option<CharPath>) -> Outcome {
    let Some(p) = path else {
        return Outcome::new(false, "no path".into());
    };
    let w0 = p.samples[0].w_field;
    let ser = riccati_along(&p, w0, 1e6);
    let t_trust = p.last_trusted_time(0.5);
    let mut worst = 0.0f64;
    let mut last_t = 0.0;
    for (s, w) in p.samples.iter().zip(&ser.w) {
        if s.t > t_trust {
            break;
        }
        worst = worst.max(((s.w_field - w) / w).abs());
        last_t = s.t;
    }
    Outcome::new(
        worst < 0.01,
        format!("max relative mismatch {worst:.2e} up to t = {last_t:.4} (w0 = {w0:.3})"),
    )
}

// 6. Rarefactive data to T = 200.

fn c6() -> (Outcome, Vec<DensityCase>) {
    let g = gas(5.0 / 3.0);
    let init = |n| {
        let gr = grid(-400.0, 400.0, n, Boundary::ConstantExtension);
        sample_initial(
            &g,
            &gr,
            &|_| 1.0,
            &|x: f64| 3.0 * (x / 10.0).tanh(),
            &|_| 0.0,
        )
        .unwrap()
        .0
    };
    let snap = init(2048);
    let cfg = solver(200.0, 0.0);
    let (run, _, track) = traced(&g, &snap, &cfg, &[], Some(isentropic_params(&g, &snap)));
    let b = run.budget;
    let max_y = run
        .monitors
        .iter()
        .map(|m| m.max_y)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_q = run
        .monitors
        .iter()
        .map(|m| m.max_q)
        .fold(f64::NEG_INFINITY, f64::max);
    let (slope, _, r2) = tail_linear_fit(&run, 0.5);
    let pass = run.termination == Termination::HorizonReached
        && max_y <= b.y_sup + 1e-6
        && max_q <= b.q_sup + 1e-6
        && r2 >= 0.99;
    let coarse = traced(&g, &init(1024), &cfg, &[], None).0;
    let case = DensityCase {
        name: "rarefactive T=200".into(),
        track: track.unwrap(),
        fine: run.monitors.clone(),
        coarse: coarse.monitors,
    };
    let detail = format!(
        "t = {:.1}, max y - Y = {:.2e}, max q - Q = {:.2e}, tail slope {slope:.4}, R^2 {r2:.5}",
        run.final_time(),
        max_y - b.y_sup,
        max_q - b.q_sup
    );
    (Outcome::new(pass, detail), vec![case])
}

// 7. Density bounds over every monitored run with 1 < gamma < 3.

fn c7(cases: &[DensityCase]) -> Outcome {
    let mut pass = !cases.is_empty();
    let mut worst_name = String::new();
    let mut worst_ratio = f64::NEG_INFINITY;
    for c in cases {
        let scheme = max_tau_discrepancy(&c.fine, &c.coarse);
        let allowed = 1e-6 * c.track.params.bound_sup(c.track.worst_t) + scheme;
        let ok = c.track.worst_margin >= -allowed;
        pass &= ok;
        // Excess over the bound as a fraction of the allowance (≤ 0 when below the bound).
        let ratio = -c.track.worst_margin / allowed;
        if ratio > worst_ratio {
            worst_ratio = ratio;
            worst_name = c.name.clone();
        }
    }
    Outcome::new(
        pass,
        format!(
            "{} runs; tightest: {worst_name} (excess/allowance {worst_ratio:.3})",
            cases.len()
        ),
    )
}

// 8. Stationary preservation.

fn stationary_drift(run: &RunResult, initial: &FieldSnapshot) -> f64 {
    run.snapshots
        .iter()
        .flat_map(|s| {
            s.tau
                .iter()
                .zip(&initial.tau)
                .chain(s.u.iter().zip(&initial.u))
                .map(|(a, b)| (a - b).abs())
        })
        .fold(0.0, f64::max)
}

fn c8() -> (Outcome, Vec<DensityCase>) {
    let g = gas(5.0 / 3.0);
    type Entropy = fn(f64) -> f64;
    let scenarios: [(&str, f64, f64, Boundary, Entropy); 2] = [
        ("1/(x^2+1)", -20.0, 20.0, Boundary::ConstantExtension, |x| {
            1.0 / (x * x + 1.0)
        }),
        ("0.1 sin x", 0.0, 2.0 * PI, Boundary::Periodic, |x| {
            0.1 * x.sin()
        }),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    let mut cases = Vec::new();
    for (label, lo, hi, b, s) in scenarios {
        let mut drifts = Vec::new();
        let mut prev: Option<RunResult> = None;
        for n in [512, 1024, 2048] {
            let snap = stationary_solution(&g, &grid(lo, hi, n, b), &s, 1.0).unwrap();
            let (params, thr) = full_params(&g, &snap);
            let cfg = SolverConfig {
                snapshot_cadence: 25,
                ..solver(10.0, thr)
            };
            let (run, _, track) = traced(&g, &snap, &cfg, &[], Some(params));
            pass &= run.termination == Termination::HorizonReached;
            drifts.push(stationary_drift(&run, &snap));
            if let Some(p) = prev.take() {
                cases.push(DensityCase {
                    name: format!("stationary {label} n={n}"),
                    track: track.unwrap(),
                    fine: run.monitors.clone(),
                    coarse: p.monitors,
                });
            }
            prev = Some(run);
        }
        let ord = orders(&drifts);
        pass &= drifts[2] <= 1e-4 && ord.iter().all(|&o| o >= 1.8);
        parts.push(format!(
            "S = {label}: drifts {}, orders {}",
            sci(&drifts),
            fixed(&ord)
        ));
    }
    (Outcome::new(pass, parts.join("; ")), cases)
}

// 9. Threshold sharpness on the critical family.

fn c9() -> (Outcome, Vec<DensityCase>) {
    let g = gas(5.0 / 3.0);
    let gr = |n| grid(-2.0, 2.0, n, Boundary::ConstantExtension);
    let family = |n| critical_family(&g, &gr(n), 0.02, 1.0, 1.0).unwrap();
    let mut cases = Vec::new();

    let fam = family(512);
    let snap = &fam.snapshot;
    let global = certify(&g, snap, CertificateMode::FullGlobal).unwrap();
    let (params, thr) = full_params(&g, snap);
    let cfg = solver(100.0, thr);
    let (run, _, track) = traced(&g, snap, &cfg, &[], Some(params));
    let coarse = traced(&g, &family(256).snapshot, &cfg, &[], None).0;
    cases.push(DensityCase {
        name: "critical family T=100".into(),
        track: track.unwrap(),
        fine: run.monitors.clone(),
        coarse: coarse.monitors,
    });
    let smooth = run.termination == Termination::HorizonReached;
    let t_critical = run.final_time();
    let critical_ok =
        fam.max_residual <= 1e-10 && global.verdict == Verdict::ThresholdNotMet && smooth;

    // Velocity perturbation solved so that inf y = −1.2·N_ab(1 + B_ab).
    let mode = CertificateMode::FullLocal {
        alpha: -2.0,
        beta: 2.0,
    };
    let amplified = |n: usize, amp: f64| {
        let base = family(n).snapshot;
        let u: Vec<f64> = base
            .grid
            .nodes()
            .iter()
            .map(|&x| -amp * (x / 0.2).tanh())
            .collect();
        FieldSnapshot::from_primitive(
            &g,
            &base.grid,
            0.0,
            base.tau.clone(),
            u,
            base.entropy.clone(),
        )
        .unwrap()
    };
    let excess = |amp: f64| {
        let c = certify(&g, &amplified(2048, amp), mode).unwrap();
        c.w0 + 1.2 * c.threshold
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while excess(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let snap = amplified(2048, hi);
    let cert = certify(&g, &snap, mode).unwrap();
    let b_ab = cert.domain.as_ref().map_or(f64::NAN, |d| d.b_ab);
    let (params, thr) = full_params(&g, &snap);
    let cfg = solver(2.0 * cert.t_ub, thr);
    let (run, _, track) = traced(&g, &snap, &cfg, &[], Some(params));
    let coarse = traced(&g, &amplified(1024, hi), &cfg, &[], None).0;
    cases.push(DensityCase {
        name: "amplified critical".into(),
        track: track.unwrap(),
        fine: run.monitors.clone(),
        coarse: coarse.monitors,
    });
    let rec = reconcile(&cert, &run);
    let bracket_ok = run
        .bracket()
        .is_some_and(|(l, h)| h <= cert.t_ub + (h - l) + BRACKET_TOLERANCE * cert.t_ub);
    let amplified_ok = cert.margin >= b_ab
        && cert.verdict == Verdict::CertifiedBlowup
        && rec.verdict == Verdict::CertifiedBlowup
        && bracket_ok;
    let detail = format!(
        "residual {:.1e}, global verdict {}, {} at t = {:.0}; amplified U = {hi:.4}: margin {:.3} >= B {:.3}, bracket {:?} vs T_ub {:.4}, {}",
        fam.max_residual,
        global.verdict,
        if smooth { "smooth" } else { "not smooth" },
        t_critical,
        cert.margin,
        b_ab,
        run.bracket().map(|(l, h)| (round4(l), round4(h))),
        cert.t_ub,
        rec.verdict
    );
    (Outcome::new(critical_ok && amplified_ok, detail), cases)
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

// 10. Pressure audits.

fn c10() -> Outcome {
    let mut worst = 0.0f64;
    let mut pass = true;
    for gamma in [1.2, 1.4, 5.0 / 3.0, 2.0, 3.0, 4.0] {
        let audit = GeneralPressureLaw::power_law(1.0, gamma, 1e-3, 1e3)
            .unwrap()
            .audit();
        match audit.a_min {
            Some(a) => worst = worst.max((a - ((3.0 - gamma) / (gamma + 1.0)).max(0.0)).abs()),
            None => pass = false,
        }
        pass &= audit.monotone_ok && audit.convex_ok;
    }
    pass &= worst <= 1e-6;
    let two = GeneralPressureLaw::sum_of_powers(&[(1.0, 2.0), (1.0, 1.0)], 1e-3, 1e3)
        .unwrap()
        .audit();
    pass &= two.monotone_ok && two.convex_ok && two.a_min.is_some();
    Outcome::new(
        pass,
        format!(
            "gamma-law A_min worst error {worst:.2e}; tau^-2 + tau^-1: monotone {}, convex {}, A_min {:?}",
            two.monotone_ok, two.convex_ok, two.a_min
        ),
    )
}

// 11. Critical exponent.

fn c11() -> Outcome {
    let a = critical_theta(5.0 / 3.0);
    let b = critical_theta(3.0);
    let pass = (a + 0.7).abs() <= 1e-12 && (b + 1.0 / 3.0).abs() <= 1e-12;
    Outcome::new(pass, format!("theta(5/3) = {a:.15}, theta(3) = {b:.15}"))
}

// 12. Determinism of the simulate command.

const DETERMINISM_CONFIG: &str = r#"
[gas]
gamma = 1.4
K = 1.0
c_v = 1.0

[grid]
x_min = 0.0
x_max = 6.283185307179586
n = 512
boundary = "periodic"

[init]
kind = "profiles"

[init.tau]
kind = "sine"
offset = 1.0
amplitude = 0.1

[init.u]
kind = "sine"
amplitude = -0.5
phase = 0.3

[init.S]
kind = "gaussian-bump"
amplitude = 0.2
center = 3.0

[solver]
horizon = 3.0
snapshot_cadence = 40
"#;

fn c12() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("det.toml");
    std::fs::write(&cfg, DETERMINISM_CONFIG).unwrap();
    let simulate = |out: &Path| {
        Command::new(env!("CARGO_BIN_EXE_eulerlab"))
            .args(["simulate", "--quiet", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(out)
            .status()
            .unwrap()
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let (sa, sb) = (simulate(&a), simulate(&b));
    let mut pass = sa.code() == sb.code() && matches!(sa.code(), Some(0 | 3));
    let mut sizes = Vec::new();
    for f in ["snapshots.csv", "monitors.csv", "paths.csv"] {
        let (x, y) = (
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap(),
        );
        pass &= x == y && !x.is_empty();
        sizes.push(format!("{f} {} bytes", x.len()));
    }
    Outcome::new(
        pass,
        format!("exit {:?} twice; identical {}", sa.code(), sizes.join(", ")),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let timed = |f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let o = f();
        (o, t.elapsed().as_secs_f64())
    };
    let (r3, r5, r6, r8, r9, r12) = std::thread::scope(|s| {
        let t3 = s.spawn(|| {
            let t = Instant::now();
            (c3(), t.elapsed().as_secs_f64())
        });
        let t5 = s.spawn(|| {
            let t = Instant::now();
            (c5(), t.elapsed().as_secs_f64())
        });
        let t6 = s.spawn(|| {
            let t = Instant::now();
            (c6(), t.elapsed().as_secs_f64())
        });
        let t8 = s.spawn(|| {
            let t = Instant::now();
            (c8(), t.elapsed().as_secs_f64())
        });
        let t9 = s.spawn(|| {
            let t = Instant::now();
            (c9(), t.elapsed().as_secs_f64())
        });
        let t12 = s.spawn(|| timed(&c12));
        (
            t3.join().unwrap(),
            t5.join().unwrap(),
            t6.join().unwrap(),
            t8.join().unwrap(),
            t9.join().unwrap(),
            t12.join().unwrap(),
        )
    });
    let ((o3, d3), s3) = r3;
    let ((o5, path, d5), s5) = r5;
    let ((o6, d6), s6) = r6;
    let ((o8, d8), s8) = r8;
    let ((o9, d9), s9) = r9;
    let mut density: Vec<DensityCase> = Vec::new();
    for d in [d3, d5, d6, d8, d9] {
        density.extend(d);
    }

    let results: Vec<(&str, Outcome, f64)> = vec![
        ("constant identities", timed(&c1).0, 0.0),
        ("transform roundtrips", timed(&c2).0, 0.0),
        ("invariant transport order", o3, s3),
        ("Riccati consistency", c4(path), s5),
        ("blowup before T_ub", o5, s5),
        ("rarefactive data stay smooth", o6, s6),
        ("density upper bounds", c7(&density), 0.0),
        ("stationary preservation", o8, s8),
        ("threshold sharpness", o9, s9),
        ("pressure audit", timed(&c10).0, 0.0),
        ("critical exponent", c11(), 0.0),
        ("simulate determinism", r12.0, r12.1),
    ];
    let mut failed = 0;
    for (i, (name, o, secs)) in results.iter().enumerate() {
        let status = if o.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!o.pass);
        let time = if *secs > 0.0 {
            format!(" [{secs:.1} s]")
        } else {
            String::new()
        };
        println!(
            "criterion {:>2} {status}: {name}: {}{time}",
            i + 1,
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed in {:.1} s",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
