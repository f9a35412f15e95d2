//! quditfuse — command-line front end for the generalized qudit fusion
//! simulator. Exit codes: 0 success (theorems hold), 1 theorem violation,
//! 2 configuration error, 3 numeric failure.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{cmd_fuse, cmd_haar_scan, cmd_optimize, cmd_verify};
use config::{OptimizeRunConfig, ScenarioConfig, VerifyConfig};
use report::OutputFormat;

const EXIT_CONFIG_ERROR: u8 = 2;
const EXIT_NUMERIC_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "quditfuse",
    version,
    about = "Simulate, verify and optimize generalized type-II fusion of qudit cluster states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one fusion scenario and tabulate every heralded outcome.
    Fuse {
        /// Scenario config (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Override the config seed (and the Haar seed of the unitary source).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// json, csv or both.
        #[arg(long, default_value = "both")]
        format: String,
    },
    /// Randomized verification of the rank bounds over Haar unitaries.
    Verify {
        /// Verify config (JSON) with d list, ancilla list, trials and seed.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Qudit dimensions, comma separated (overrides config).
        #[arg(long, value_delimiter = ',')]
        d: Vec<usize>,
        /// Ancilla counts, comma separated (overrides config).
        #[arg(long, value_delimiter = ',')]
        ancillae: Vec<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value = "both")]
        format: String,
        /// Push a corrupted density matrix through the rank check; the run
        /// must then exit 1. Negative-path testing only.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Search interferometer unitaries for maximal heralded success.
    Optimize {
        /// Optimization run config (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Override the optimizer seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value = "both")]
        format: String,
    },
    /// Sample Haar unitaries and report first-moment statistics.
    HaarScan {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value = "both")]
        format: String,
    },
}

fn init_thread_pool() {
    if let Ok(raw) = std::env::var("QUDITFUSE_THREADS") {
        if let Ok(n) = raw.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(RunError::Config(e)) => {
            eprintln!("config error: {e:#}");
            ExitCode::from(EXIT_CONFIG_ERROR)
        }
        Err(RunError::Numeric(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_NUMERIC_ERROR)
        }
    }
}

enum RunError {
    Config(anyhow::Error),
    Numeric(anyhow::Error),
}

fn run(cli: Cli) -> Result<u8, RunError> {
    match cli.command {
        Command::Fuse {
            config,
            seed,
            out,
            format,
        } => {
            let format = OutputFormat::parse(&format).map_err(RunError::Config)?;
            let mut cfg = ScenarioConfig::load(&config).map_err(RunError::Config)?;
            if let Some(s) = seed {
                cfg.seed = s;
                if cfg.unitary.haar_seed.is_some() {
                    cfg.unitary.haar_seed = Some(s);
                }
            }
            let base = config.parent().unwrap_or_else(|| std::path::Path::new("."));
            prepare_out(&out)?;
            cmd_fuse(&cfg, base, &out, format)
                .map(|c| c as u8)
                .map_err(RunError::Numeric)
        }
        Command::Verify {
            config,
            d,
            ancillae,
            trials,
            seed,
            out,
            format,
            inject_fault,
        } => {
            let format = OutputFormat::parse(&format).map_err(RunError::Config)?;
            let mut cfg = match config {
                Some(path) => VerifyConfig::load(&path).map_err(RunError::Config)?,
                None => VerifyConfig {
                    d: vec![],
                    ancillae: vec![],
                    trials: 200,
                    seed: 0,
                },
            };
            if !d.is_empty() {
                cfg.d = d;
            }
            if !ancillae.is_empty() {
                cfg.ancillae = ancillae;
            }
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if cfg.d.is_empty() || cfg.ancillae.is_empty() {
                return Err(RunError::Config(anyhow::anyhow!(
                    "verify needs --d and --ancillae lists (or a config file)"
                )));
            }
            prepare_out(&out)?;
            cmd_verify(&cfg, &out, format, inject_fault)
                .map(|c| c as u8)
                .map_err(RunError::Numeric)
        }
        Command::Optimize {
            config,
            seed,
            out,
            format,
        } => {
            let format = OutputFormat::parse(&format).map_err(RunError::Config)?;
            let mut cfg = OptimizeRunConfig::load(&config).map_err(RunError::Config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let base = config.parent().unwrap_or_else(|| std::path::Path::new("."));
            prepare_out(&out)?;
            cmd_optimize(&cfg, base, &out, format)
                .map(|c| c as u8)
                .map_err(RunError::Numeric)
        }
        Command::HaarScan {
            k,
            trials,
            seed,
            out,
            format,
        } => {
            let format = OutputFormat::parse(&format).map_err(RunError::Config)?;
            prepare_out(&out)?;
            cmd_haar_scan(k, trials, seed, &out, format)
                .map(|c| c as u8)
                .map_err(RunError::Numeric)
        }
    }
}

fn prepare_out(out: &PathBuf) -> Result<(), RunError> {
    std::fs::create_dir_all(out)
        .map_err(|e| RunError::Config(anyhow::anyhow!("cannot create output directory: {e}")))
}
