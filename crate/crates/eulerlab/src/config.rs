//! Scenario configuration files.
//!
//! A config is flat TOML: `[section]` headers followed by `key = value` lines.
//! Profiles for the initial data live in `[init.tau]`, `[init.u]` and
//! `[init.S]`. Unknown keys are rejected, and every error names the offending
//! key and, when it can be located, its line.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use eulerlab_core::analysis_bounds::CertificateMode;
use eulerlab_core::evolution::{SolverConfig, DEFAULT_BLOWUP_FACTOR};
use eulerlab_core::fields_init::{Boundary, Grid1D, Profile, MIN_CELLS};
use eulerlab_core::gas_thermo::GasModel;
use eulerlab_core::interp::Interpolation;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}{key}: {message}", line_prefix(*line))]
    Invalid {
        key: String,
        line: Option<usize>,
        message: String,
    },
}

fn line_prefix(line: Option<usize>) -> String {
    line.map_or_else(String::new, |l| format!("line {l}: "))
}

impl ConfigError {
    /// Dotted key the error refers to, e.g. `gas.gamma`.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::Invalid { key, .. } => Some(key),
            ConfigError::Io { .. } => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub gas: GasSection,
    /// Required by every command except `audit-pressure`.
    pub grid: Option<GridSection>,
    pub init: Option<InitSection>,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
    #[serde(default)]
    pub output: OutputSection,
    pub pressure: Option<PressureSection>,
    /// Dotted key → list of values; the sweep runs their Cartesian product.
    #[serde(default)]
    pub sweep: BTreeMap<String, Vec<toml::Value>>,
    #[serde(skip)]
    source: Option<Source>,
}

/// Parsed document and the directory relative paths resolve against.
#[derive(Debug, Clone, PartialEq)]
struct Source {
    table: toml::Table,
    text: String,
    base_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasSection {
    pub gamma: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(default = "one")]
    pub c_v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryKind {
    Periodic,
    ConstantExtension,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub boundary: BoundaryKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitKind {
    /// Built-in profiles for `τ₀`, `u₀`, `S₀`.
    Profiles,
    /// Tabulated `x, tau, u, S` columns from a CSV file.
    File,
    /// Pressure-balanced rest state on `S₀`.
    Stationary,
    /// Critical family `m^θ = slope·x + offset`.
    Critical,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitSection {
    pub kind: InitKind,
    pub file: Option<PathBuf>,
    pub k_tau_s: Option<f64>,
    pub slope: Option<f64>,
    pub offset: Option<f64>,
    pub tau: Option<ProfileSection>,
    /// Velocity; added to the rest state for `stationary` and `critical`.
    pub u: Option<ProfileSection>,
    #[serde(rename = "S")]
    pub entropy: Option<ProfileSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    Constant,
    Sine,
    GaussianBump,
    TanhRamp,
    Lorentzian,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    pub kind: ProfileKind,
    pub value: Option<f64>,
    #[serde(default)]
    pub offset: f64,
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default = "one")]
    pub wavenumber: f64,
    #[serde(default)]
    pub phase: f64,
    #[serde(default)]
    pub center: f64,
    #[serde(default = "one")]
    pub width: f64,
}

impl ProfileSection {
    pub fn to_profile(&self) -> Profile {
        match self.kind {
            ProfileKind::Constant => Profile::Constant {
                value: self.value.unwrap_or(self.offset),
            },
            ProfileKind::Sine => Profile::Sine {
                offset: self.offset,
                amplitude: self.amplitude,
                wavenumber: self.wavenumber,
                phase: self.phase,
            },
            ProfileKind::GaussianBump => Profile::GaussianBump {
                offset: self.offset,
                amplitude: self.amplitude,
                center: self.center,
                width: self.width,
            },
            ProfileKind::TanhRamp => Profile::TanhRamp {
                offset: self.offset,
                amplitude: self.amplitude,
                center: self.center,
                width: self.width,
            },
            ProfileKind::Lorentzian => Profile::Lorentzian {
                offset: self.offset,
                amplitude: self.amplitude,
                center: self.center,
                width: self.width,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterpolationKind {
    Linear,
    MonotoneCubic,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub cfl: f64,
    pub horizon: f64,
    pub snapshot_cadence: usize,
    pub blowup_factor: f64,
    pub dt_min: Option<f64>,
    pub interpolation: InterpolationKind,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            cfl: 0.9,
            horizon: 1.0,
            snapshot_cadence: 0,
            blowup_factor: DEFAULT_BLOWUP_FACTOR,
            dt_min: None,
            interpolation: InterpolationKind::MonotoneCubic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeKind {
    Isentropic,
    FullGlobal,
    FullLocal,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisSection {
    /// Unset: isentropic for constant entropy, full-global otherwise.
    pub mode: Option<ModeKind>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    /// Absolute slack on the gradient and `L∞` bounds.
    pub bound_tolerance: f64,
    /// Relative slack on the density bound.
    pub density_rel_tolerance: f64,
    /// Absolute slack on the density bound.
    pub density_abs_tolerance: f64,
    /// Add the `max τ` discrepancy against a half-resolution run to the density slack.
    pub companion_run: bool,
    /// Evenly spaced characteristic seeds added to the compressive minima.
    pub seed_paths: usize,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        Self {
            mode: None,
            alpha: None,
            beta: None,
            bound_tolerance: 1e-6,
            density_rel_tolerance: 1e-6,
            density_abs_tolerance: 0.0,
            companion_run: false,
            seed_paths: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Snapshots,
    Monitors,
    Paths,
    Report,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub directory: PathBuf,
    /// Write every `cadence`-th stored snapshot (the last one always).
    pub cadence: usize,
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
            cadence: 1,
            formats: vec![
                OutputFormat::Snapshots,
                OutputFormat::Monitors,
                OutputFormat::Paths,
                OutputFormat::Report,
            ],
        }
    }
}

impl OutputSection {
    pub fn wants(&self, f: OutputFormat) -> bool {
        self.formats.contains(&f)
    }
}

/// `p(τ) = Σ cᵢ τ^{-eᵢ}`, given as `[cᵢ, eᵢ]` pairs.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PressureSection {
    pub terms: Vec<[f64; 2]>,
    #[serde(default = "default_tau_lo")]
    pub tau_lo: f64,
    #[serde(default = "default_tau_hi")]
    pub tau_hi: f64,
    pub samples: Option<usize>,
}

fn one() -> f64 {
    1.0
}

fn default_tau_lo() -> f64 {
    1e-3
}

fn default_tau_hi() -> f64 {
    1e3
}

/// Read and validate a config file. Relative paths inside it resolve
/// against the file's directory.
pub fn parse_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_config_str(&text, &base)
}

pub fn parse_config_str(text: &str, base_dir: &Path) -> Result<ScenarioConfig> {
    let table: toml::Table = toml::from_str(text).map_err(|e| parse_error(text, &e))?;
    let mut cfg: ScenarioConfig = toml::from_str(text).map_err(|e| parse_error(text, &e))?;
    cfg.source = Some(Source {
        table,
        text: text.to_string(),
        base_dir: base_dir.to_path_buf(),
    });
    cfg.validate()?;
    Ok(cfg)
}

fn parse_error(text: &str, e: &toml::de::Error) -> ConfigError {
    let msg = e.message().to_string();
    let line = e.span().map(|s| line_of(text, s.start));
    let field = backticked(&msg);
    let key = match line {
        Some(l) => {
            let (section, key_here) = section_and_key_at(text, l);
            match (&field, key_here) {
                (Some(f), _) if msg.starts_with("missing field") => join(&section, f),
                (_, Some(k)) => join(&section, &k),
                (Some(f), None) => join(&section, f),
                (None, None) => section,
            }
        }
        None => field.unwrap_or_default(),
    };
    let message = if msg.starts_with("unknown field") {
        format!("unknown key ({msg})")
    } else {
        msg
    };
    ConfigError::Invalid {
        key: if key.is_empty() {
            "<document>".into()
        } else {
            key
        },
        line,
        message,
    }
}

fn join(section: &str, key: &str) -> String {
    if section.is_empty() {
        key.to_string()
    } else {
        format!("{section}.{key}")
    }
}

fn backticked(msg: &str) -> Option<String> {
    let start = msg.find('`')? + 1;
    let len = msg[start..].find('`')?;
    Some(msg[start..start + len].to_string())
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn header_name(line: &str) -> Option<String> {
    let t = line.trim();
    let inner = t.strip_prefix('[')?.split(']').next()?;
    Some(inner.trim().to_string())
}

fn key_name(line: &str) -> Option<String> {
    let t = line.trim();
    if t.starts_with('#') || t.starts_with('[') {
        return None;
    }
    let (k, _) = t.split_once('=')?;
    Some(k.trim().trim_matches('"').to_string())
}

/// Section in force at a 1-based line, and the key defined on that line.
fn section_and_key_at(text: &str, line: usize) -> (String, Option<String>) {
    let mut section = String::new();
    let mut key = None;
    for (i, l) in text.lines().enumerate() {
        if let Some(h) = header_name(l) {
            section = h;
        }
        if i + 1 == line {
            key = key_name(l);
            break;
        }
    }
    (section, key)
}

/// 1-based line on which `key` is set inside `[section]`.
fn locate(text: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    let mut header_line = None;
    for (i, l) in text.lines().enumerate() {
        if let Some(h) = header_name(l) {
            current = h;
            if current == section {
                header_line = Some(i + 1);
            }
            continue;
        }
        if current == section && key_name(l).as_deref() == Some(key) {
            return Some(i + 1);
        }
    }
    header_line
}

impl ScenarioConfig {
    fn invalid(&self, section: &str, key: &str, message: impl Into<String>) -> ConfigError {
        let line = self
            .source
            .as_ref()
            .and_then(|s| locate(&s.text, section, key));
        ConfigError::Invalid {
            key: join(section, key),
            line,
            message: message.into(),
        }
    }

    /// Directory that relative paths in the config resolve against.
    pub fn base_dir(&self) -> &Path {
        self.source
            .as_ref()
            .map_or(Path::new(""), |s| s.base_dir.as_path())
    }

    /// Range and consistency checks beyond what the types enforce.
    pub fn validate(&self) -> Result<()> {
        let g = &self.gas;
        if !(g.gamma.is_finite() && g.gamma > 1.0) {
            return Err(self.invalid("gas", "gamma", format!("must exceed 1, got {}", g.gamma)));
        }
        if !(g.k.is_finite() && g.k > 0.0) {
            return Err(self.invalid("gas", "K", format!("must be positive, got {}", g.k)));
        }
        if !(g.c_v.is_finite() && g.c_v > 0.0) {
            return Err(self.invalid("gas", "c_v", format!("must be positive, got {}", g.c_v)));
        }
        if let Err(e) = GasModel::new(g.gamma, g.k, g.c_v) {
            return Err(self.invalid("gas", "gamma", e.to_string()));
        }

        if let Some(gr) = &self.grid {
            if !(gr.x_min.is_finite() && gr.x_max.is_finite() && gr.x_min < gr.x_max) {
                return Err(self.invalid("grid", "x_max", "need finite x_min < x_max"));
            }
            if gr.n < MIN_CELLS {
                return Err(self.invalid(
                    "grid",
                    "n",
                    format!("need at least {MIN_CELLS} cells, got {}", gr.n),
                ));
            }
        }
        if let Some(init) = &self.init {
            self.validate_init(init)?;
        }

        let s = &self.solver;
        if !(s.cfl > 0.0 && s.cfl <= 1.0) {
            return Err(self.invalid(
                "solver",
                "cfl",
                format!("must lie in (0, 1], got {}", s.cfl),
            ));
        }
        if !(s.horizon > 0.0 && s.horizon.is_finite()) {
            return Err(self.invalid(
                "solver",
                "horizon",
                format!("must be positive, got {}", s.horizon),
            ));
        }
        if !(s.blowup_factor > 10.0) {
            return Err(self.invalid(
                "solver",
                "blowup_factor",
                format!("must exceed 10, got {}", s.blowup_factor),
            ));
        }
        if let Some(d) = s.dt_min {
            if !(d > 0.0) {
                return Err(self.invalid("solver", "dt_min", format!("must be positive, got {d}")));
            }
        }

        let a = &self.analysis;
        if a.mode == Some(ModeKind::FullLocal) {
            let (Some(lo), Some(hi)) = (a.alpha, a.beta) else {
                let missing = if a.alpha.is_none() { "alpha" } else { "beta" };
                return Err(self.invalid(
                    "analysis",
                    missing,
                    "required for mode = \"full-local\"",
                ));
            };
            if !(lo < hi) {
                return Err(self.invalid(
                    "analysis",
                    "beta",
                    format!("need alpha < beta, got [{lo}, {hi}]"),
                ));
            }
        }
        for (key, v) in [
            ("bound_tolerance", a.bound_tolerance),
            ("density_rel_tolerance", a.density_rel_tolerance),
            ("density_abs_tolerance", a.density_abs_tolerance),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(self.invalid(
                    "analysis",
                    key,
                    format!("must be finite and >= 0, got {v}"),
                ));
            }
        }

        if self.output.cadence == 0 {
            return Err(self.invalid("output", "cadence", "must be at least 1"));
        }
        if let Some(p) = &self.pressure {
            if p.terms.is_empty() {
                return Err(self.invalid(
                    "pressure",
                    "terms",
                    "need at least one [coefficient, exponent] pair",
                ));
            }
            if !(p.tau_lo > 0.0 && p.tau_hi > p.tau_lo && p.tau_hi.is_finite()) {
                return Err(self.invalid("pressure", "tau_hi", "need 0 < tau_lo < tau_hi"));
            }
            if p.samples.is_some_and(|n| n < 16) {
                return Err(self.invalid("pressure", "samples", "need at least 16 samples"));
            }
        }
        for (key, values) in &self.sweep {
            if values.is_empty() {
                return Err(self.invalid("sweep", key, "needs at least one value"));
            }
            if key.starts_with("sweep") || !key.contains('.') {
                return Err(self.invalid(
                    "sweep",
                    key,
                    "must be a dotted key such as \"gas.gamma\"",
                ));
            }
        }
        Ok(())
    }

    fn validate_init(&self, i: &InitSection) -> Result<()> {
        for (name, p) in [
            ("init.tau", &i.tau),
            ("init.u", &i.u),
            ("init.S", &i.entropy),
        ] {
            let Some(p) = p else { continue };
            if p.kind == ProfileKind::Constant && p.value.is_none() {
                return Err(self.invalid(name, "value", "required for kind = \"constant\""));
            }
            if matches!(
                p.kind,
                ProfileKind::GaussianBump | ProfileKind::TanhRamp | ProfileKind::Lorentzian
            ) && !(p.width > 0.0 && p.width.is_finite())
            {
                return Err(self.invalid(
                    name,
                    "width",
                    format!("must be positive, got {}", p.width),
                ));
            }
        }
        if let Some(k) = i.k_tau_s {
            if !(k > 0.0 && k.is_finite()) {
                return Err(self.invalid("init", "k_tau_s", format!("must be positive, got {k}")));
            }
        }
        let unused = |key: &str, present: bool| -> Result<()> {
            if present {
                Err(self.invalid(
                    "init",
                    key,
                    format!("not used by kind = \"{}\"", kind_label(i.kind)),
                ))
            } else {
                Ok(())
            }
        };
        match i.kind {
            InitKind::Profiles => {
                if i.tau.is_none() {
                    return Err(self.invalid("init", "tau", "a [init.tau] profile is required"));
                }
                unused("file", i.file.is_some())?;
                unused("slope", i.slope.is_some())?;
            }
            InitKind::File => {
                if i.file.is_none() {
                    return Err(self.invalid("init", "file", "required for kind = \"file\""));
                }
                unused("tau", i.tau.is_some())?;
                unused("u", i.u.is_some())?;
                unused("S", i.entropy.is_some())?;
            }
            InitKind::Stationary => {
                if i.entropy.is_none() {
                    return Err(self.invalid("init", "S", "a [init.S] profile is required"));
                }
                unused("tau", i.tau.is_some())?;
                unused("file", i.file.is_some())?;
            }
            InitKind::Critical => {
                if i.slope.is_none() {
                    return Err(self.invalid("init", "slope", "required for kind = \"critical\""));
                }
                if i.offset.is_none() {
                    return Err(self.invalid("init", "offset", "required for kind = \"critical\""));
                }
                unused("tau", i.tau.is_some())?;
                unused("S", i.entropy.is_some())?;
                unused("file", i.file.is_some())?;
            }
        }
        Ok(())
    }

    pub fn gas_model(&self) -> GasModel {
        GasModel::new(self.gas.gamma, self.gas.k, self.gas.c_v).expect("validated gas")
    }

    /// The grid and initial-data sections, which evolution commands need.
    pub fn scenario(&self) -> Result<(Grid1D, &InitSection)> {
        let missing = |key: &str| ConfigError::Invalid {
            key: key.into(),
            line: None,
            message: "section required for this command".into(),
        };
        let gr = self.grid.as_ref().ok_or_else(|| missing("grid"))?;
        let init = self.init.as_ref().ok_or_else(|| missing("init"))?;
        let boundary = match gr.boundary {
            BoundaryKind::Periodic => Boundary::Periodic,
            BoundaryKind::ConstantExtension => Boundary::ConstantExtension,
        };
        let grid = Grid1D::new(gr.x_min, gr.x_max, gr.n, boundary).expect("validated grid");
        Ok((grid, init))
    }

    pub fn solver_config(&self, critical_threshold: f64) -> SolverConfig {
        let s = &self.solver;
        SolverConfig {
            cfl: s.cfl,
            horizon: s.horizon,
            snapshot_cadence: s.snapshot_cadence,
            blowup_factor: s.blowup_factor,
            dt_min: s.dt_min,
            interpolation: match s.interpolation {
                InterpolationKind::Linear => Interpolation::Linear,
                InterpolationKind::MonotoneCubic => Interpolation::MonotoneCubic,
            },
            critical_threshold,
        }
    }

    /// Certificate mode; `None` picks by whether the entropy is constant.
    pub fn certificate_mode(&self, entropy_constant: bool) -> CertificateMode {
        match self.analysis.mode {
            Some(ModeKind::Isentropic) => CertificateMode::Isentropic,
            Some(ModeKind::FullGlobal) => CertificateMode::FullGlobal,
            Some(ModeKind::FullLocal) => CertificateMode::FullLocal {
                alpha: self.analysis.alpha.expect("validated window"),
                beta: self.analysis.beta.expect("validated window"),
            },
            None if entropy_constant => CertificateMode::Isentropic,
            None => CertificateMode::FullGlobal,
        }
    }

    /// Path of `init.file`, resolved against the config's directory.
    pub fn init_file(&self) -> Option<PathBuf> {
        self.init.as_ref()?.file.as_ref().map(|f| {
            if f.is_absolute() {
                f.clone()
            } else {
                self.base_dir().join(f)
            }
        })
    }

    /// The same config with dotted keys replaced, re-validated.
    pub fn with_overrides(&self, overrides: &[(String, toml::Value)]) -> Result<ScenarioConfig> {
        let src = self.source.as_ref().ok_or_else(|| ConfigError::Invalid {
            key: "sweep".into(),
            line: None,
            message: "overrides need a config parsed from text".into(),
        })?;
        let mut table = src.table.clone();
        table.remove("sweep");
        for (key, value) in overrides {
            set_dotted(&mut table, key, value.clone()).map_err(|message| ConfigError::Invalid {
                key: key.clone(),
                line: None,
                message,
            })?;
        }
        let mut cfg: ScenarioConfig =
            toml::Value::Table(table.clone())
                .try_into()
                .map_err(|e: toml::de::Error| ConfigError::Invalid {
                    key: overrides
                        .iter()
                        .map(|o| o.0.as_str())
                        .collect::<Vec<_>>()
                        .join(", "),
                    line: None,
                    message: e.message().to_string(),
                })?;
        cfg.source = Some(Source {
            table,
            text: String::new(),
            base_dir: src.base_dir.clone(),
        });
        cfg.validate()?;
        Ok(cfg)
    }

    /// All combinations of the sweep values, in key order with the last key varying fastest.
    pub fn sweep_tuples(&self) -> Vec<Vec<(String, toml::Value)>> {
        let mut out: Vec<Vec<(String, toml::Value)>> = vec![Vec::new()];
        for (key, values) in &self.sweep {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |v| {
                        let mut next = prefix.clone();
                        next.push((key.clone(), v.clone()));
                        next
                    })
                })
                .collect();
        }
        if self.sweep.is_empty() {
            Vec::new()
        } else {
            out
        }
    }
}

fn kind_label(kind: InitKind) -> &'static str {
    match kind {
        InitKind::Profiles => "profiles",
        InitKind::File => "file",
        InitKind::Stationary => "stationary",
        InitKind::Critical => "critical",
    }
}

fn set_dotted(
    table: &mut toml::Table,
    key: &str,
    value: toml::Value,
) -> std::result::Result<(), String> {
    let parts: Vec<&str> = key.split('.').collect();
    let (last, path) = parts.split_last().ok_or("empty key")?;
    let mut t = table;
    for p in path {
        t = t
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| format!("`{p}` is not a section"))?;
    }
    t.insert(last.to_string(), value);
    Ok(())
}
