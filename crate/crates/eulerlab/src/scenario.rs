//! Commands: build initial data from a config, run it, check it against the
//! analytic bounds and write the results.

use std::fs;
use std::path::{Path, PathBuf};

use eulerlab_core::analysis_bounds::{
    certify, max_tau_discrepancy, reconcile, verify_run, A2Envelope, BlowupCertificate,
    CertificateMode, DensityBoundParams, DensityMonitor, MonitorReport, RunBounds, Verdict,
};
use eulerlab_core::characteristics::{default_seeds, CharPath, PathTracer};
use eulerlab_core::evolution::{run_observed, RunResult, StepObserver, Termination};
use eulerlab_core::fields_init::{
    critical_family, entropy_diagnostics, gradient_budget, sample_initial, stationary_solution,
    CriticalFamily, FieldSnapshot, Grid1D, Profile,
};
use eulerlab_core::gas_thermo::{GasModel, GeneralPressureLaw, PressureAudit};
use thiserror::Error;

use crate::config::{
    ConfigError, InitKind, InitSection, OutputFormat, ProfileSection, ScenarioConfig,
};
use crate::output::{
    read_tabulated, write_monitors, write_paths, write_snapshots, OutputError, Report,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_BOUND_VIOLATED: i32 = 2;
pub const EXIT_STEP_FAILURE: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Output(#[from] OutputError),
    #[error("{context}: {source}")]
    Core {
        context: &'static str,
        #[source]
        source: eulerlab_core::Error,
    },
    #[error("cannot create {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl ScenarioError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Config(_) | ScenarioError::Core { .. } => EXIT_CONFIG,
            ScenarioError::Output(_) | ScenarioError::Io { .. } => EXIT_IO,
        }
    }
}

pub type Result<T> = std::result::Result<T, ScenarioError>;

fn core(context: &'static str) -> impl Fn(eulerlab_core::Error) -> ScenarioError {
    move |source| ScenarioError::Core { context, source }
}

/// Command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Replaces `output.directory`.
    pub out_dir: Option<PathBuf>,
    /// Replaces `analysis.seed_paths`.
    pub seed_paths: Option<usize>,
}

/// Output directory, created if missing. A relative `output.directory`
/// resolves against the config's directory.
pub fn output_dir(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<PathBuf> {
    let dir = match &opts.out_dir {
        Some(d) => d.clone(),
        None if cfg.output.directory.is_absolute() => cfg.output.directory.clone(),
        None => cfg.base_dir().join(&cfg.output.directory),
    };
    fs::create_dir_all(&dir).map_err(|source| ScenarioError::Io {
        path: dir.clone(),
        source,
    })?;
    Ok(dir)
}

/// Initial state, and the critical-family data when `init.kind = "critical"`.
pub struct Initial {
    pub snapshot: FieldSnapshot,
    pub family: Option<CriticalFamily>,
}

fn profile(section: &Option<ProfileSection>, default: f64) -> Profile {
    section.as_ref().map_or(
        Profile::Constant { value: default },
        ProfileSection::to_profile,
    )
}

/// Add the optional `[init.u]` velocity to a rest state.
fn with_velocity(
    gas: &GasModel,
    grid: &Grid1D,
    rest: FieldSnapshot,
    u: &Option<ProfileSection>,
) -> Result<FieldSnapshot> {
    let Some(u) = u else { return Ok(rest) };
    let u = u.to_profile();
    let vel: Vec<f64> = grid
        .nodes()
        .iter()
        .zip(&rest.u)
        .map(|(&x, u0)| u0 + u.eval(x))
        .collect();
    FieldSnapshot::from_primitive(gas, grid, rest.t, rest.tau, vel, rest.entropy)
        .map_err(core("initial data"))
}

pub fn build_initial(cfg: &ScenarioConfig, grid: &Grid1D, init: &InitSection) -> Result<Initial> {
    let gas = cfg.gas_model();
    let k_tau_s = init.k_tau_s.unwrap_or(1.0);
    match init.kind {
        InitKind::Profiles => {
            let (tau, u, s) = (
                profile(&init.tau, 1.0),
                profile(&init.u, 0.0),
                profile(&init.entropy, 0.0),
            );
            let (snapshot, _) =
                sample_initial(&gas, grid, &|x| tau.eval(x), &|x| u.eval(x), &|x| s.eval(x))
                    .map_err(core("initial data"))?;
            Ok(Initial {
                snapshot,
                family: None,
            })
        }
        InitKind::File => {
            let path = cfg.init_file().expect("validated init.file");
            let tab = read_tabulated(&path)?;
            let (snapshot, _) =
                sample_initial(&gas, grid, &|x| tab.tau.eval(x), &|x| tab.u.eval(x), &|x| {
                    tab.entropy.eval(x)
                })
                .map_err(core("initial data"))?;
            Ok(Initial {
                snapshot,
                family: None,
            })
        }
        InitKind::Stationary => {
            let s = profile(&init.entropy, 0.0);
            let rest = stationary_solution(&gas, grid, &|x| s.eval(x), k_tau_s)
                .map_err(core("stationary state"))?;
            let snapshot = with_velocity(&gas, grid, rest, &init.u)?;
            Ok(Initial {
                snapshot,
                family: None,
            })
        }
        InitKind::Critical => {
            let fam = critical_family(
                &gas,
                grid,
                init.slope.expect("validated slope"),
                init.offset.expect("validated offset"),
                k_tau_s,
            )
            .map_err(core("critical family"))?;
            let snapshot = with_velocity(&gas, grid, fam.snapshot.clone(), &init.u)?;
            Ok(Initial {
                snapshot,
                family: Some(fam),
            })
        }
    }
}

pub fn termination_label(t: &Termination) -> &'static str {
    match t {
        Termination::HorizonReached => "horizon-reached",
        Termination::BlowupDetected { .. } => "blowup-detected",
        Termination::StepFailure { .. } => "step-failure",
    }
}

fn termination_code(t: &Termination) -> i32 {
    if matches!(t, Termination::StepFailure { .. }) {
        EXIT_STEP_FAILURE
    } else {
        EXIT_OK
    }
}

/// Threshold entering the run's gradient budget: 0 for isentropic
/// certificates, the global threshold otherwise.
fn global_certificate(
    gas: &GasModel,
    snap: &FieldSnapshot,
    mode: CertificateMode,
) -> Option<BlowupCertificate> {
    match mode {
        CertificateMode::Isentropic => None,
        _ => certify(gas, snap, CertificateMode::FullGlobal).ok(),
    }
}

fn run_traced(
    cfg: &ScenarioConfig,
    opts: &RunOptions,
    snap: &FieldSnapshot,
    threshold: f64,
    extra: Option<&mut dyn StepObserver>,
) -> Result<(RunResult, Vec<CharPath>)> {
    let gas = cfg.gas_model();
    let solver = cfg.solver_config(threshold);
    let seeds = default_seeds(snap, opts.seed_paths.unwrap_or(cfg.analysis.seed_paths));
    let mut tracer = PathTracer::new(&seeds, solver.interpolation);
    let run = match extra {
        Some(obs) => run_observed(&gas, snap, &solver, &mut [&mut tracer, obs]),
        None => run_observed(&gas, snap, &solver, &mut [&mut tracer]),
    }
    .map_err(core("solver"))?;
    Ok((run, tracer.into_paths()))
}

fn write_run_files(
    cfg: &ScenarioConfig,
    dir: &Path,
    run: &RunResult,
    paths: &[CharPath],
) -> Result<()> {
    let out = &cfg.output;
    if out.wants(OutputFormat::Snapshots) {
        let last = run.snapshots.len().saturating_sub(1);
        let kept = run
            .snapshots
            .iter()
            .enumerate()
            .filter(|(i, _)| i.is_multiple_of(out.cadence) || *i == last)
            .map(|(_, s)| s);
        write_snapshots(&dir.join("snapshots.csv"), kept)?;
    }
    if out.wants(OutputFormat::Monitors) {
        write_monitors(&dir.join("monitors.csv"), &run.monitors)?;
    }
    if out.wants(OutputFormat::Paths) {
        write_paths(&dir.join("paths.csv"), paths)?;
    }
    Ok(())
}

fn report_run(rep: &mut Report, run: &RunResult) -> std::result::Result<(), OutputError> {
    rep.text("termination", termination_label(&run.termination))?;
    if let Termination::StepFailure { reason, .. } = &run.termination {
        rep.text("failure_reason", reason)?;
    }
    let (lo, hi) = run.bracket().unwrap_or((f64::NAN, f64::NAN));
    rep.float("bracket_lo", lo)?;
    rep.float("bracket_hi", hi)?;
    rep.float("final_time", run.final_time())?;
    rep.int("steps", run.monitors.len().saturating_sub(1) as i64)?;
    rep.float("y_bar", run.budget.y_bar)?;
    rep.float("q_bar", run.budget.q_bar)?;
    if let Some(m) = run.monitors.last() {
        rep.float("final_max_gradient", m.gradient_magnitude())?;
        rep.float("final_max_tau", m.max_tau)?;
    }
    Ok(())
}

pub struct SimulateOutcome {
    pub run: RunResult,
    pub paths: Vec<CharPath>,
    pub exit_code: i32,
}

pub fn simulate(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<SimulateOutcome> {
    let (grid, init) = cfg.scenario()?;
    let gas = cfg.gas_model();
    let initial = build_initial(cfg, &grid, init)?;
    let snap = &initial.snapshot;
    let mode = cfg.certificate_mode(snap.entropy.is_constant());
    let threshold = global_certificate(&gas, snap, mode).map_or(0.0, |c| c.threshold);
    let (run, paths) = run_traced(cfg, opts, snap, threshold, None)?;
    let dir = output_dir(cfg, opts)?;
    write_run_files(cfg, &dir, &run, &paths)?;
    if cfg.output.wants(OutputFormat::Report) {
        let mut rep = Report::new();
        rep.text("command", "simulate")?;
        rep.float("threshold", threshold)?;
        report_run(&mut rep, &run)?;
        rep.write(&dir.join("summary.txt"))?;
    }
    let exit_code = termination_code(&run.termination);
    Ok(SimulateOutcome {
        run,
        paths,
        exit_code,
    })
}

pub struct CertifyOutcome {
    /// Certificate after reconciliation with the run.
    pub certificate: BlowupCertificate,
    pub checks: MonitorReport,
    pub run: RunResult,
    pub paths: Vec<CharPath>,
    /// `max τ` discrepancy against the half-resolution run, when requested.
    pub companion_discrepancy: Option<f64>,
    pub exit_code: i32,
}

fn density_params(
    gas: &GasModel,
    snap: &FieldSnapshot,
    mode: CertificateMode,
    threshold: f64,
) -> Option<DensityBoundParams> {
    if gas.gamma() >= 3.0 {
        return None;
    }
    let budget = gradient_budget(snap, threshold);
    match mode {
        CertificateMode::Isentropic => DensityBoundParams::isentropic(gas, snap, &budget).ok(),
        _ => {
            let diag = entropy_diagnostics(gas, snap, None).ok()?;
            DensityBoundParams::full(gas, snap, &budget, diag.m_u).ok()
        }
    }
}

pub fn certify_scenario(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<CertifyOutcome> {
    let (grid, init) = cfg.scenario()?;
    let gas = cfg.gas_model();
    let initial = build_initial(cfg, &grid, init)?;
    let snap = &initial.snapshot;
    let mode = cfg.certificate_mode(snap.entropy.is_constant());
    let cert = certify(&gas, snap, mode).map_err(core("certificate"))?;
    let global = match mode {
        CertificateMode::FullGlobal => Some(cert.clone()),
        _ => global_certificate(&gas, snap, mode),
    };
    let threshold = global.as_ref().map_or(0.0, |c| c.threshold);

    let density = density_params(&gas, snap, mode, threshold);
    let mut monitor = density.clone().map(DensityMonitor::new);
    let (run, paths) = run_traced(
        cfg,
        opts,
        snap,
        threshold,
        monitor.as_mut().map(|m| m as &mut dyn StepObserver),
    )?;

    let companion_discrepancy = if cfg.analysis.companion_run && density.is_some() {
        let coarse_grid = grid
            .with_cells((grid.n / 2).max(eulerlab_core::fields_init::MIN_CELLS))
            .map_err(core("companion grid"))?;
        let coarse = build_initial(cfg, &coarse_grid, init)?;
        let solver = cfg.solver_config(threshold);
        let coarse_run = run_observed(&gas, &coarse.snapshot, &solver, &mut [])
            .map_err(core("companion run"))?;
        Some(max_tau_discrepancy(&run.monitors, &coarse_run.monitors))
    } else {
        None
    };

    let analysis = &cfg.analysis;
    let bounds = RunBounds {
        budget: Some(run.budget),
        density_track: monitor.map(DensityMonitor::into_track),
        density: None,
        linfty: global.as_ref().and_then(|c| c.linfty),
        tolerance: analysis.bound_tolerance,
        density_rel_tolerance: analysis.density_rel_tolerance,
        density_abs_tolerance: analysis.density_abs_tolerance
            + companion_discrepancy.unwrap_or(0.0),
    };
    let checks = verify_run(&run, &bounds);
    let certificate = reconcile(&cert, &run);

    let violated = certificate.verdict == Verdict::BoundViolated || !checks.all_passed();
    let exit_code = termination_code(&run.termination).max(if violated {
        EXIT_BOUND_VIOLATED
    } else {
        EXIT_OK
    });

    let dir = output_dir(cfg, opts)?;
    write_run_files(cfg, &dir, &run, &paths)?;
    if cfg.output.wants(OutputFormat::Report) {
        let rep = certificate_report(&certificate, &checks, &run, &bounds, companion_discrepancy)?;
        rep.write(&dir.join("certificate.txt"))?;
    }
    Ok(CertifyOutcome {
        certificate,
        checks,
        run,
        paths,
        companion_discrepancy,
        exit_code,
    })
}

fn certificate_report(
    cert: &BlowupCertificate,
    checks: &MonitorReport,
    run: &RunResult,
    bounds: &RunBounds,
    companion: Option<f64>,
) -> std::result::Result<Report, OutputError> {
    let mut rep = Report::new();
    rep.text("command", "certify")?;
    rep.text("mode", cert.mode.label())?;
    if let CertificateMode::FullLocal { alpha, beta } = cert.mode {
        rep.float("alpha", alpha)?;
        rep.float("beta", beta)?;
    }
    rep.text("verdict", &cert.verdict.to_string())?;
    rep.float("w0", cert.w0)?;
    rep.text("w0_family", cert.w0_family.label())?;
    rep.float("w0_x", cert.w0_x)?;
    rep.float("threshold", cert.threshold)?;
    rep.float("margin", cert.margin)?;
    rep.float("factor", cert.factor)?;
    match cert.envelope {
        A2Envelope::Decaying { k10, k9 } => {
            rep.text("envelope", "decaying")?;
            rep.float("envelope_k10", k10)?;
            rep.float("envelope_k9", k9)?;
        }
        A2Envelope::Constant { floor } => {
            rep.text("envelope", "constant")?;
            rep.float("envelope_floor", floor)?;
        }
    }
    rep.float("t_ub", cert.t_ub)?;
    report_run(&mut rep, run)?;
    if let Some(l) = &cert.linfty {
        rep.float("linfty.s_bound", l.s_bound)?;
        rep.float("linfty.r_bound", l.r_bound)?;
        rep.float("linfty.u_bound", l.u_bound)?;
        rep.float("linfty.eta_bound", l.e_u)?;
    }
    if let Some(d) = &cert.domain {
        rep.float("domain.n_ab", d.n_ab)?;
        rep.float("domain.b_ab", d.b_ab)?;
        rep.float("domain.t_ab_lower", d.t_ab_lower)?;
    }
    if let Some(c) = companion {
        rep.float("companion_tau_discrepancy", c)?;
    }
    rep.float("density_abs_tolerance", bounds.density_abs_tolerance)?;
    rep.bool("checks_passed", checks.all_passed())?;
    for c in &checks.checks {
        rep.bool(&format!("check.{}.passed", c.name), c.passed)?;
        rep.float(&format!("check.{}.worst_margin", c.name), c.worst_margin)?;
        rep.float(&format!("check.{}.at_t", c.name), c.at_t)?;
    }
    rep.text("note", cert.note.trim())?;
    Ok(rep)
}

pub fn audit_pressure(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<PressureAudit> {
    let (mut law, lo, hi) = match &cfg.pressure {
        Some(p) => {
            let terms: Vec<(f64, f64)> = p.terms.iter().map(|t| (t[0], t[1])).collect();
            let law = GeneralPressureLaw::sum_of_powers(&terms, p.tau_lo, p.tau_hi)
                .map_err(core("pressure law"))?;
            (law, p.tau_lo, p.tau_hi)
        }
        None => {
            let (lo, hi) = (1e-3, 1e3);
            let law = GeneralPressureLaw::power_law(cfg.gas.k, cfg.gas.gamma, lo, hi)
                .map_err(core("pressure law"))?;
            (law, lo, hi)
        }
    };
    if let Some(n) = cfg.pressure.as_ref().and_then(|p| p.samples) {
        law.samples = n;
    }
    let audit = law.audit();
    let dir = output_dir(cfg, opts)?;
    let mut rep = Report::new();
    rep.text("command", "audit-pressure")?;
    rep.float("tau_lo", lo)?;
    rep.float("tau_hi", hi)?;
    rep.bool("monotone_ok", audit.monotone_ok)?;
    rep.bool("convex_ok", audit.convex_ok)?;
    rep.bool(
        "integral_small_tau_divergent",
        audit.integral_small_tau_divergent,
    )?;
    rep.bool("integral_large_tau_finite", audit.integral_large_tau_finite)?;
    rep.bool("a_min_finite", audit.a_min.is_some())?;
    rep.float("a_min", audit.a_min.unwrap_or(f64::INFINITY))?;
    rep.float("a_raw_max", audit.a_raw_max)?;
    let (eps, small): (Vec<f64>, Vec<f64>) = audit.small_tau_partials.iter().copied().unzip();
    rep.floats("small_tau_eps", &eps)?;
    rep.floats("small_tau_integral", &small)?;
    let (ups, large): (Vec<f64>, Vec<f64>) = audit.large_tau_partials.iter().copied().unzip();
    rep.floats("large_tau_u", &ups)?;
    rep.floats("large_tau_integral", &large)?;
    rep.int("faults", audit.faults.len() as i64)?;
    if let Some(f) = audit.faults.first() {
        rep.text("first_fault", &format!("{} at tau = {}", f.quantity, f.tau))?;
    }
    rep.write(&dir.join("pressure_audit.txt"))?;
    Ok(audit)
}

pub fn family(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<CriticalFamily> {
    let (grid, init) = cfg.scenario()?;
    if init.kind != InitKind::Critical {
        return Err(ConfigError::Invalid {
            key: "init.kind".into(),
            line: None,
            message: "the family command needs kind = \"critical\"".into(),
        }
        .into());
    }
    let gas = cfg.gas_model();
    let initial = build_initial(cfg, &grid, init)?;
    let fam = initial.family.expect("critical init builds a family");
    let dir = output_dir(cfg, opts)?;
    write_snapshots(&dir.join("initial.csv"), [&initial.snapshot])?;
    let mut rep = Report::new();
    rep.text("command", "family")?;
    rep.float("theta", fam.theta)?;
    rep.float("slope", init.slope.unwrap_or(f64::NAN))?;
    rep.float("offset", init.offset.unwrap_or(f64::NAN))?;
    rep.float("k_tau_s", init.k_tau_s.unwrap_or(1.0))?;
    rep.float("y_closed", fam.y_closed)?;
    rep.float("max_residual", fam.max_residual)?;
    if let Ok(cert) = certify(&gas, &initial.snapshot, CertificateMode::FullGlobal) {
        rep.float("global_threshold", cert.threshold)?;
        rep.float("w0", cert.w0)?;
        rep.text("global_verdict", &cert.verdict.to_string())?;
    }
    rep.write(&dir.join("family.txt"))?;
    Ok(fam)
}
