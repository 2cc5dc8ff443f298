//! Command-line entry point.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime error, 3 verification
//! failure. The env var EP2D_THREADS caps the worker pool.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ep2d::config::RunConfig;
use ep2d::{Error, Result};

#[derive(Parser)]
#[command(name = "ep2d", version, about = "Pseudo-spectral laboratory for the 2D Euler-Poisson electron fluid near equilibrium")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a configured run and write CSV / JSON / SVG artifacts.
    Simulate {
        /// Run configuration (TOML, or JSON with a .json extension).
        #[arg(long)]
        config: PathBuf,
    },
    /// Run named verification checks and write a JSON report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Check names; empty selection runs the full suite.
        #[arg(long = "check")]
        checks: Vec<String>,
        /// Report path (defaults to stdout).
        #[arg(long)]
        report: Option<PathBuf>,
        /// List the available checks and exit.
        #[arg(long)]
        list: bool,
    },
    /// Evaluate the corrected profile What at given frequencies of a dump.
    Normalform {
        /// Field dump of the unknown U (frequency representation).
        #[arg(long)]
        input: PathBuf,
        /// JSON list of integer mode pairs, e.g. [[1,0],[2,1]].
        #[arg(long)]
        freqs: PathBuf,
        /// Time stamp of the dump.
        #[arg(long, default_value_t = 0.0)]
        time: f64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// One-shot norm evaluation of a field dump, JSON to stdout.
    Norms {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        time: f64,
        /// Sobolev index N of the high norm.
        #[arg(long, default_value_t = 30)]
        n: u32,
        /// Sobolev index N0 of the Y norm.
        #[arg(long, default_value_t = 20)]
        n0: u32,
        /// Energy orders to evaluate.
        #[arg(long = "sigma", default_values_t = [3u32])]
        sigma_list: Vec<u32>,
    },
    /// Re-fit a decay exponent from a norm CSV column.
    DecayFit {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        column: String,
        #[arg(long, default_value_t = 1.0)]
        t0: f64,
        #[arg(long, default_value_t = f64::INFINITY)]
        t1: f64,
    },
}

fn init_threads() {
    if let Ok(v) = std::env::var("EP2D_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
}

/// Ok(true) means all verification checks passed, Ok(false) means a check
/// failed (exit 3).
fn dispatch(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Simulate { config } => {
            let cfg = RunConfig::from_path(&config)?;
            let arts = ep2d::cli::simulate(&cfg)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&arts.summary)
                    .map_err(|e| Error::Format(e.to_string()))?
            );
            Ok(true)
        }
        Command::Verify {
            config,
            checks,
            report,
            list,
        } => {
            if list {
                for c in ep2d::cli::AVAILABLE_CHECKS {
                    println!("{c}");
                }
                return Ok(true);
            }
            let cfg = RunConfig::from_path(&config)?;
            let rep = ep2d::cli::verify(&cfg, &checks)?;
            let text = serde_json::to_string_pretty(&rep)
                .map_err(|e| Error::Format(e.to_string()))?;
            match report {
                Some(path) => std::fs::write(path, text + "\n")?,
                None => println!("{text}"),
            }
            for c in &rep.checks {
                println!("{}: {}", c.name, if c.pass { "PASS" } else { "FAIL" });
            }
            Ok(rep.pass)
        }
        Command::Normalform {
            input,
            freqs,
            time,
            out,
        } => {
            let text = std::fs::read_to_string(&freqs)?;
            let ks: Vec<[i64; 2]> = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidInput(format!("frequency list parse: {e}")))?;
            ep2d::cli::normalform(&input, &ks, time, &out)?;
            Ok(true)
        }
        Command::Norms {
            input,
            time,
            n,
            n0,
            sigma_list,
        } => {
            let norms = ep2d::config::NormsSection {
                n,
                n0,
                sigma_list,
                delta: 0.01,
            };
            let rep = ep2d::cli::norms_of_dump(&input, time, &norms)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&rep).map_err(|e| Error::Format(e.to_string()))?
            );
            Ok(true)
        }
        Command::DecayFit { csv, column, t0, t1 } => {
            let fit = ep2d::cli::decay_fit_csv(&csv, &column, t0, t1)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&fit).map_err(|e| Error::Format(e.to_string()))?
            );
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version requests are successful exits
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    init_threads();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Config(_) | Error::InvalidInput(_) => 1,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
