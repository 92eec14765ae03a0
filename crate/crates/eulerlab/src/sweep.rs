//! Parameter sweeps: the certify command over the Cartesian product of the
//! `[sweep]` values, one subdirectory per combination.

use std::path::Path;

use rayon::prelude::*;

use crate::config::{ConfigError, ScenarioConfig};
use crate::output::{fmt_f64, OutputError};
use crate::scenario::{
    certify_scenario, output_dir, termination_label, Result, RunOptions, ScenarioError,
};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "EULERLAB_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub index: usize,
    pub values: Vec<(String, toml::Value)>,
    pub exit_code: i32,
    pub verdict: String,
    pub threshold: f64,
    pub t_ub: f64,
    pub bracket: Option<(f64, f64)>,
    pub termination: String,
    pub error: String,
}

pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    /// Largest exit code among the combinations.
    pub exit_code: i32,
}

fn thread_count() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()?
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
}

fn render_value(v: &toml::Value) -> String {
    match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Float(f) => fmt_f64(*f),
        other => other.to_string(),
    }
}

fn run_one(
    base: &ScenarioConfig,
    opts: &RunOptions,
    root: &Path,
    index: usize,
    values: Vec<(String, toml::Value)>,
) -> SweepRow {
    let mut row = SweepRow {
        index,
        values,
        exit_code: 0,
        verdict: String::new(),
        threshold: f64::NAN,
        t_ub: f64::NAN,
        bracket: None,
        termination: String::new(),
        error: String::new(),
    };
    let result = base
        .with_overrides(&row.values)
        .map_err(ScenarioError::from)
        .and_then(|cfg| {
            let sub = RunOptions {
                out_dir: Some(root.join(format!("run_{index:04}"))),
                seed_paths: opts.seed_paths,
            };
            certify_scenario(&cfg, &sub)
        });
    match result {
        Ok(out) => {
            row.exit_code = out.exit_code;
            row.verdict = out.certificate.verdict.to_string();
            row.threshold = out.certificate.threshold;
            row.t_ub = out.certificate.t_ub;
            row.bracket = out.run.bracket();
            row.termination = termination_label(&out.run.termination).to_string();
        }
        Err(e) => {
            row.exit_code = e.exit_code();
            row.error = e.to_string();
        }
    }
    row
}

pub fn sweep(cfg: &ScenarioConfig, opts: &RunOptions) -> Result<SweepOutcome> {
    let tuples = cfg.sweep_tuples();
    if tuples.is_empty() {
        return Err(ConfigError::Invalid {
            key: "sweep".into(),
            line: None,
            message: "no [sweep] values given".into(),
        }
        .into());
    }
    let root = output_dir(cfg, opts)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_count() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().expect("thread pool");
    let rows: Vec<SweepRow> = pool.install(|| {
        tuples
            .into_par_iter()
            .enumerate()
            .map(|(i, values)| run_one(cfg, opts, &root, i, values))
            .collect()
    });
    write_summary(&root.join("sweep_summary.csv"), cfg, &rows)?;
    let exit_code = rows.iter().map(|r| r.exit_code).max().unwrap_or(0);
    Ok(SweepOutcome { rows, exit_code })
}

fn write_summary(
    path: &Path,
    cfg: &ScenarioConfig,
    rows: &[SweepRow],
) -> std::result::Result<(), OutputError> {
    let csv_err = |source| OutputError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    let mut header = vec!["index".to_string()];
    header.extend(cfg.sweep.keys().cloned());
    header.extend(
        [
            "exit_code",
            "verdict",
            "threshold",
            "t_ub",
            "bracket_lo",
            "bracket_hi",
            "termination",
            "error",
        ]
        .map(String::from),
    );
    w.write_record(&header).map_err(csv_err)?;
    for r in rows {
        let (lo, hi) = r.bracket.unwrap_or((f64::NAN, f64::NAN));
        let mut rec = vec![r.index.to_string()];
        rec.extend(r.values.iter().map(|(_, v)| render_value(v)));
        rec.push(r.exit_code.to_string());
        rec.push(r.verdict.clone());
        rec.extend([r.threshold, r.t_ub, lo, hi].map(fmt_f64));
        rec.push(r.termination.clone());
        rec.push(r.error.clone());
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(|source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    })
}
