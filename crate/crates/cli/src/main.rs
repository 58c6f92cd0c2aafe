//! `ruggeri`: characteristic analysis, blowup simulations, nonlinearity scans
//! and amplitude sweeps for the relaxed compressible Navier-Stokes family.
//!
//! Exit codes: 0 success, 1 domain or configuration error, 2 a closed form
//! disagrees with its oracle, 64 usage error.

mod analyze;
mod config;
mod csv;
mod error;
mod scan;
mod setup;
mod simulate;
mod sweep;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use config::Config;
use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "ruggeri", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Speeds, eigenvectors and nonlinearity coefficients at one state.
    #[command(allow_negative_numbers = true)]
    Analyze(analyze::AnalyzeArgs),
    /// One simulation; writes series.csv, snapshot_<t>.csv and summary.
    Simulate(ConfigArgs),
    /// Nonlinearity sign scan or threshold table, as CSV.
    Scan(ConfigArgs),
    /// Amplitude sweep of a simulation, as CSV.
    Sweep(ConfigArgs),
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Configuration file (`[section]` headers, `key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Override one entry, e.g. `--set grid.n_cells=1024`. Repeatable.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory for `simulate`, output file for `scan` and `sweep`
    /// (standard output when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ConfigArgs {
    fn load(&self) -> Result<Config> {
        let mut cfg = Config::load(&self.config)?;
        for o in &self.overrides {
            cfg.set(o)?;
        }
        Ok(cfg)
    }
}

/// Caps the worker pool used by scans and sweeps at `RUGGERI_THREADS`.
fn init_threads() -> Result<()> {
    let Ok(value) = std::env::var("RUGGERI_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::config(format!("RUGGERI_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::config(format!("cannot start worker pool: {e}")))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => csv::write_file(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Analyze(a) => analyze::run(a),
        Command::Simulate(a) => {
            let mut cfg = a.load()?;
            let rc = setup::run_config(&mut cfg)?;
            cfg.finish()?;
            let dir = a.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            let res = simulate::simulate(&rc, &dir)?;
            eprint!("{}", simulate::summary_text(&res));
            Ok(())
        }
        Command::Scan(a) => {
            let mut cfg = a.load()?;
            let out = scan::scan(&mut cfg)?;
            cfg.finish()?;
            emit(out.table.as_str(), a.out.as_deref())?;
            for c in &out.crossings {
                let form = if c.reduced { "reduced" } else { "exact" };
                eprintln!("crossing ({form}): theta={} tau={}", csv::num(c.theta), csv::num(c.tau));
            }
            Ok(())
        }
        Command::Sweep(a) => {
            let mut cfg = a.load()?;
            let out = sweep::sweep(&mut cfg)?;
            cfg.finish()?;
            emit(out.table.as_str(), a.out.as_deref())?;
            let show = |b: Option<(f64, f64)>, monotone: bool| match b {
                Some((lo, hi)) => format!("[{}, {}] monotone={monotone}", csv::num(lo), csv::num(hi)),
                None => format!("none monotone={monotone}"),
            };
            eprintln!("bracket: {}", show(out.bracket, out.monotone));
            if let Some((b, m)) = out.refined {
                eprintln!("bracket_refined: {}", show(b, m));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };
    let result = init_threads().and_then(|_| dispatch(&cli.command));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
