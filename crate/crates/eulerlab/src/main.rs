use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eulerlab::scenario::{self, EXIT_CONFIG};
use eulerlab::{parse_config, sweep, RunOptions, ScenarioError};

#[derive(Parser)]
#[command(
    name = "eulerlab",
    version,
    about = "Smooth 1D Euler flows up to gradient blowup"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Scenario config (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding `output.directory`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Evenly spaced characteristic seeds, overriding `analysis.seed_paths`.
    #[arg(long)]
    seed_paths: Option<usize>,
    /// Suppress the summary on stdout.
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the initial data and write snapshots, monitors and paths.
    Simulate(Common),
    /// Certify blowup for the initial data and check the run against every bound.
    Certify(Common),
    /// Audit a pressure law for monotonicity, convexity and its `A` constant.
    AuditPressure(Common),
    /// Build a critical stationary family and write it out.
    Family(Common),
    /// Certify every combination of the `[sweep]` values.
    Sweep(Common),
}

fn execute(cmd: &Command) -> Result<(i32, Vec<String>), ScenarioError> {
    let common = match cmd {
        Command::Simulate(c)
        | Command::Certify(c)
        | Command::AuditPressure(c)
        | Command::Family(c)
        | Command::Sweep(c) => c,
    };
    let cfg = parse_config(&common.config)?;
    let opts = RunOptions {
        out_dir: common.out.clone(),
        seed_paths: common.seed_paths,
    };
    Ok(match cmd {
        Command::Simulate(_) => {
            let o = scenario::simulate(&cfg, &opts)?;
            let line = format!(
                "{} at t = {:.6}",
                scenario::termination_label(&o.run.termination),
                o.run.final_time()
            );
            (o.exit_code, vec![line])
        }
        Command::Certify(_) => {
            let o = scenario::certify_scenario(&cfg, &opts)?;
            let c = &o.certificate;
            let mut lines = vec![format!(
                "{}: w0 = {:.6e}, threshold = {:.6e}, T_ub = {:.6}",
                c.verdict, c.w0, c.threshold, c.t_ub
            )];
            if let Some((lo, hi)) = o.run.bracket() {
                lines.push(format!("blowup bracket [{lo:.6}, {hi:.6}]"));
            }
            for ch in o.checks.checks.iter().filter(|ch| !ch.passed) {
                lines.push(format!(
                    "check {} failed (margin {:.3e} at t = {:.4})",
                    ch.name, ch.worst_margin, ch.at_t
                ));
            }
            (o.exit_code, lines)
        }
        Command::AuditPressure(_) => {
            let a = scenario::audit_pressure(&cfg, &opts)?;
            let line = format!(
                "monotone {}, convex {}, A_min {}",
                a.monotone_ok,
                a.convex_ok,
                a.a_min
                    .map_or("unbounded".to_string(), |v| format!("{v:.6}"))
            );
            (0, vec![line])
        }
        Command::Family(_) => {
            let f = scenario::family(&cfg, &opts)?;
            (
                0,
                vec![format!(
                    "theta = {:.6}, max residual = {:.3e}",
                    f.theta, f.max_residual
                )],
            )
        }
        Command::Sweep(_) => {
            let s = sweep::sweep(&cfg, &opts)?;
            let lines = s
                .rows
                .iter()
                .map(|r| {
                    let status = if r.error.is_empty() {
                        r.verdict.as_str()
                    } else {
                        r.error.as_str()
                    };
                    format!("run {:04}: exit {} {}", r.index, r.exit_code, status)
                })
                .collect();
            (s.exit_code, lines)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 });
        }
    };
    let quiet = match &cli.command {
        Command::Simulate(c)
        | Command::Certify(c)
        | Command::AuditPressure(c)
        | Command::Family(c)
        | Command::Sweep(c) => c.quiet,
    };
    match execute(&cli.command) {
        Ok((code, lines)) => {
            if !quiet {
                for l in lines {
                    println!("{l}");
                }
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
