use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid gas parameter {name} = {value}: {reason}")]
    InvalidGas {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("specific volume must be positive, got {0}")]
    NonPositiveTau(f64),
    #[error("eta must be positive, got {0}")]
    NonPositiveEta(f64),
    #[error("vacuum-adjacent state: s = {s} <= r = {r}")]
    Vacuum { r: f64, s: f64 },
    #[error("pressure law not admissible at tau = {tau}: {reason}")]
    Inadmissible { tau: f64, reason: &'static str },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("initial data rejected at x = {x}: {reason}")]
    InvalidInitialData { x: f64, reason: String },
    #[error("array length {got} does not match grid node count {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid solver configuration: {0}")]
    InvalidSolver(String),
    #[error("step failure at t = {t}: {reason}")]
    StepFailure { t: f64, reason: String },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("degenerate window [{alpha}, {beta}]: {reason}")]
    DegenerateWindow {
        alpha: f64,
        beta: f64,
        reason: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
