//! CSV and report writers, and the reader for tabulated initial data.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use eulerlab_core::characteristics::{riccati_along, CharPath};
use eulerlab_core::evolution::StepMonitor;
use eulerlab_core::fields_init::{FieldSnapshot, Profile};
use eulerlab_core::interp::MonotoneCubic;
use thiserror::Error;

/// Blowup scale handed to the Riccati integration of path output.
pub const RICCATI_SCALE: f64 = 1e6;

pub const SNAPSHOT_HEADER: [&str; 12] = [
    "t", "x", "tau", "u", "S", "eta", "c", "m", "r", "s", "y", "q",
];
pub const MONITOR_HEADER: [&str; 16] = [
    "step",
    "t",
    "dt",
    "max_y",
    "min_y",
    "max_q",
    "min_q",
    "min_tau",
    "max_tau",
    "max_abs_s",
    "max_abs_r",
    "max_abs_u",
    "max_eta",
    "resolution_ratio",
    "lax_indicator",
    "clamped_feet",
];
pub const PATH_HEADER: [&str; 8] = ["family", "t", "x", "c", "a0", "a2", "w", "w_field"];

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: {message}")]
    Table { path: PathBuf, message: String },
    #[error("report key `{0}` written twice")]
    DuplicateKey(String),
}

pub type Result<T> = std::result::Result<T, OutputError>;

/// Fixed-width scientific notation, so that reruns produce identical bytes.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|source| OutputError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

fn finish(mut w: csv::Writer<fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> OutputError + '_ {
    move |source| OutputError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// All snapshots in one file, one row per node and time level.
pub fn write_snapshots<'a>(
    path: &Path,
    snaps: impl IntoIterator<Item = &'a FieldSnapshot>,
) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(SNAPSHOT_HEADER).map_err(csv_err(path))?;
    for snap in snaps {
        let ent = &snap.entropy;
        for i in 0..snap.len() {
            let row = [
                snap.t,
                snap.grid.x(i),
                snap.tau[i],
                snap.u[i],
                ent.entropy[i],
                snap.eta[i],
                snap.c[i],
                ent.m[i],
                snap.r[i],
                snap.s[i],
                snap.y[i],
                snap.q[i],
            ];
            w.write_record(row.iter().map(|v| fmt_f64(*v)))
                .map_err(csv_err(path))?;
        }
    }
    finish(w, path)
}

pub fn write_monitors(path: &Path, monitors: &[StepMonitor]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(MONITOR_HEADER).map_err(csv_err(path))?;
    for m in monitors {
        let floats = [
            m.t,
            m.dt,
            m.max_y,
            m.min_y,
            m.max_q,
            m.min_q,
            m.min_tau,
            m.max_tau,
            m.max_abs_s,
            m.max_abs_r,
            m.max_abs_u,
            m.max_eta,
            m.resolution_ratio,
            m.lax_indicator,
        ];
        let mut row = vec![m.step.to_string()];
        row.extend(floats.iter().map(|v| fmt_f64(*v)));
        row.push(m.clamped_feet.to_string());
        w.write_record(&row).map_err(csv_err(path))?;
    }
    finish(w, path)
}

/// Paths with the Riccati solution `w` started from the first field gradient.
pub fn write_paths(path: &Path, paths: &[CharPath]) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(PATH_HEADER).map_err(csv_err(path))?;
    for p in paths {
        let Some(first) = p.samples.first() else {
            continue;
        };
        let ser = riccati_along(p, first.w_field, RICCATI_SCALE);
        for (k, s) in p.samples.iter().enumerate() {
            let w_ric = ser.w.get(k).copied().unwrap_or(f64::NAN);
            let mut row = vec![p.family.label().to_string()];
            row.extend(
                [s.t, s.x, s.c, s.a0, s.a2, w_ric, s.w_field]
                    .iter()
                    .map(|v| fmt_f64(*v)),
            );
            w.write_record(&row).map_err(csv_err(path))?;
        }
    }
    finish(w, path)
}

/// Flat `key = value` report that parses as TOML. Keys must be unique.
#[derive(Debug, Default, Clone)]
pub struct Report {
    lines: Vec<(String, String)>,
    seen: BTreeSet<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, key: &str, rendered: String) -> Result<()> {
        if !self.seen.insert(key.to_string()) {
            return Err(OutputError::DuplicateKey(key.to_string()));
        }
        self.lines.push((key.to_string(), rendered));
        Ok(())
    }

    pub fn float(&mut self, key: &str, v: f64) -> Result<()> {
        self.push(key, fmt_f64(v))
    }

    pub fn int(&mut self, key: &str, v: i64) -> Result<()> {
        self.push(key, v.to_string())
    }

    pub fn bool(&mut self, key: &str, v: bool) -> Result<()> {
        self.push(key, v.to_string())
    }

    pub fn floats(&mut self, key: &str, v: &[f64]) -> Result<()> {
        let items: Vec<String> = v.iter().map(|x| fmt_f64(*x)).collect();
        self.push(key, format!("[{}]", items.join(", ")))
    }

    pub fn text(&mut self, key: &str, v: &str) -> Result<()> {
        self.push(key, toml::Value::String(v.to_string()).to_string())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            let key = if k
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            {
                k.clone()
            } else {
                format!("\"{k}\"")
            };
            let _ = writeln!(out, "{key} = {v}");
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.render()).map_err(|source| OutputError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Profiles for `τ₀`, `u₀`, `S₀` read from a CSV with columns `x`, `tau`, `u`
/// and optionally `S`. If a `t` column is present only the first time level
/// is used, so a snapshot file written by this tool is accepted as input.
pub struct Tabulated {
    pub tau: Profile,
    pub u: Profile,
    pub entropy: Profile,
}

pub fn read_tabulated(path: &Path) -> Result<Tabulated> {
    let table_err = |message: String| OutputError::Table {
        path: path.to_path_buf(),
        message,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(csv_err(path))?;
    let headers = rdr.headers().map_err(csv_err(path))?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let need = |name: &str| col(name).ok_or_else(|| table_err(format!("missing column `{name}`")));
    let (ix, itau, iu) = (need("x")?, need("tau")?, need("u")?);
    let (is, it) = (col("S"), col("t"));

    let mut cols: [Vec<f64>; 4] = Default::default();
    let mut t_first = None;
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err(path))?;
        let get = |i: usize| -> Result<f64> {
            let raw = rec.get(i).unwrap_or("");
            raw.parse::<f64>()
                .map_err(|_| table_err(format!("row {}: `{raw}` is not a number", line + 2)))
        };
        if let Some(it) = it {
            let t = get(it)?;
            match t_first {
                None => t_first = Some(t),
                Some(t0) if t != t0 => break,
                _ => {}
            }
        }
        cols[0].push(get(ix)?);
        cols[1].push(get(itau)?);
        cols[2].push(get(iu)?);
        cols[3].push(match is {
            Some(i) => get(i)?,
            None => 0.0,
        });
    }
    let [xs, tau, u, s] = cols;
    if xs.len() < 2 {
        return Err(table_err("need at least two rows".into()));
    }
    let build = |name: &str, ys: Vec<f64>| {
        MonotoneCubic::new(xs.clone(), ys)
            .map(Profile::Tabulated)
            .ok_or_else(|| {
                table_err(format!(
                    "column `{name}`: x must be strictly increasing and values finite"
                ))
            })
    };
    Ok(Tabulated {
        tau: build("tau", tau)?,
        u: build("u", u)?,
        entropy: build("S", s)?,
    })
}
