//! `besovlab`: region classification, regularisation analysis, simulation
//! and diagram export with replayable run records.

mod commands;
mod config;
mod record;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{Context, Outcome};
use crate::config::Config;
use crate::record::{append_record, now_ms, read_records, RunRecord};

/// Operational failures map to exit codes; analysis outcomes never do.
#[derive(Debug)]
pub enum CliError {
    /// Invalid parameters or configuration: exit 2.
    Usage(String),
    /// I/O or replay mismatch: exit 1.
    Io(String),
}

impl From<besovlab::Error> for CliError {
    fn from(e: besovlab::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "besovlab",
    version,
    about = "Regularisation of cylindrical Lévy processes in weighted Besov spaces"
)]
struct Cli {
    /// Output directory for CSV/SVG files and run records.
    #[arg(long, global = true, env = "BESOVLAB_OUT")]
    out: Option<PathBuf>,
    /// Worker threads for the Monte-Carlo loops (0 = all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct RunArgs {
    /// Flat key = value config file; flags override it.
    #[arg(short = 'c', long = "config")]
    config: Option<PathBuf>,
    #[command(flatten)]
    cfg: Config,
}

#[derive(Subcommand)]
enum Cmd {
    /// Region membership of (p, s, w, d).
    Classify {
        #[command(flatten)]
        run: RunArgs,
        /// Append a run record.
        #[arg(long)]
        record: bool,
    },
    /// Stable functionals, hedgehog verdicts or τ-indices.
    Analyze {
        #[command(subcommand)]
        subject: Subject,
    },
    /// Empirical norm curves of simulated truncations.
    Simulate(RunArgs),
    /// Triebel diagrams as CSV grids and SVG.
    Diagram(RunArgs),
    /// Re-run a recorded command and compare its outputs.
    Replay {
        /// Record file (JSON lines).
        records: PathBuf,
        /// Record to replay, 0-based (default: the last).
        #[arg(long)]
        index: Option<usize>,
    },
}

#[derive(Subcommand)]
enum Subject {
    Stable(RunArgs),
    Hedgehog(RunArgs),
    Tau(RunArgs),
}

fn resolve(run: RunArgs) -> Result<Config, CliError> {
    let file = match &run.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    Ok(run.cfg.over(file))
}

fn execute(
    command: &str,
    mut cfg: Config,
    ctx: &Context,
    record: bool,
) -> Result<Outcome, CliError> {
    let started = now_ms();
    let outcome = commands::run(command, &mut cfg, ctx)?;
    if record {
        let rec = RunRecord {
            command: command.to_string(),
            params: cfg.clone(),
            seed: cfg.seed,
            workers: ctx.workers,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix_ms: started,
            finished_unix_ms: now_ms(),
            outputs: outcome.outputs.clone(),
            verdicts: outcome.verdicts.clone(),
        };
        append_record(&ctx.out, &rec)?;
    }
    Ok(outcome)
}

fn replay(
    records: &Path,
    index: Option<usize>,
    out: Option<PathBuf>,
    workers: Option<usize>,
) -> Result<bool, CliError> {
    let all = read_records(records)?;
    let i = index.unwrap_or(all.len().saturating_sub(1));
    let rec = all
        .get(i)
        .ok_or_else(|| CliError::Usage(format!("no record #{i} in {}", records.display())))?;
    if !commands::COMMANDS.contains(&rec.command.as_str()) {
        return Err(CliError::Usage(format!(
            "record #{i} has unknown command `{}`",
            rec.command
        )));
    }
    let base = records.parent().unwrap_or(Path::new("."));
    // Never overwrite the recorded outputs.
    let ctx = Context {
        out: out.unwrap_or_else(|| base.to_path_buf()).join("replay"),
        workers: workers.unwrap_or(rec.workers),
    };
    let outcome = execute(&rec.command, rec.params.clone(), &ctx, true)?;
    let mut ok = true;
    for orig in &rec.outputs {
        let fresh = outcome
            .outputs
            .iter()
            .find(|o| o.path.file_name() == orig.path.file_name());
        let same = fresh.is_some_and(|o| o.sha256 == orig.sha256);
        println!(
            "{} {}",
            if same { "match" } else { "MISMATCH" },
            orig.path.display()
        );
        ok &= same;
    }
    if outcome.outputs.len() != rec.outputs.len() {
        println!(
            "MISMATCH output count {} vs {}",
            outcome.outputs.len(),
            rec.outputs.len()
        );
        ok = false;
    }
    if outcome.verdicts != rec.verdicts {
        println!("MISMATCH verdicts");
        ok = false;
    } else {
        println!("match verdicts");
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let ctx = Context {
        out,
        workers: cli.workers.unwrap_or(0),
    };
    let result = match cli.cmd {
        Cmd::Replay { records, index } => replay(&records, index, cli.out, cli.workers),
        cmd => {
            let (command, run, record) = match cmd {
                Cmd::Classify { run, record } => ("classify", run, record),
                Cmd::Analyze {
                    subject: Subject::Stable(r),
                } => ("analyze stable", r, true),
                Cmd::Analyze {
                    subject: Subject::Hedgehog(r),
                } => ("analyze hedgehog", r, true),
                Cmd::Analyze {
                    subject: Subject::Tau(r),
                } => ("analyze tau", r, true),
                Cmd::Simulate(r) => ("simulate", r, true),
                Cmd::Diagram(r) => ("diagram", r, true),
                Cmd::Replay { .. } => unreachable!("handled above"),
            };
            resolve(run)
                .and_then(|cfg| execute(command, cfg, &ctx, record))
                .map(|outcome| {
                    print!("{}", outcome.stdout);
                    true
                })
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
