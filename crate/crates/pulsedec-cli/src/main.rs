//! `pulsedec` — voltage-fluctuation source identification from the command
//! line.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime error.

mod config;
mod runner;

use clap::{Parser, Subcommand};
use config::FileConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "pulsedec",
    about = "Decomposition of voltage-fluctuation envelopes into pulse waves",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a test-signal corpus: waveform files plus a manifest.
    Generate {
        /// Configuration file (key = value with [sections]).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the scenario's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; defaults to the configured one.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose a single waveform file and print the component table.
    Decompose {
        /// Waveform file (binary: fs f64, n u64, samples f64, little-endian).
        file: PathBuf,
        /// Number of components to extract.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Treat the file as an already-demodulated modulating signal.
        #[arg(long)]
        bypass_demod: bool,
        /// Emit a machine-readable JSON report instead of a table.
        #[arg(long)]
        json: bool,
        /// Optional configuration file for estimator knobs.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run the full chain over a corpus and write error statistics.
    Experiment {
        /// Configuration file (key = value with [sections]).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the scenario's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker count; 0 uses all logical CPUs.
        #[arg(long)]
        workers: Option<usize>,
        /// Skip demodulation and decompose the true modulating signals.
        #[arg(long)]
        bypass_demod: bool,
        /// Output directory; defaults to the configured one.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(config: &Option<PathBuf>) -> anyhow::Result<FileConfig> {
    match config {
        Some(path) => config::load_config(path),
        None => Ok(FileConfig::default()),
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Generate { config, seed, out } => {
            let mut cfg = load(&config)?;
            if let Some(seed) = seed {
                cfg.scenario.master_seed = seed;
            }
            let dir = out.unwrap_or_else(|| cfg.experiment.output_dir.clone());
            runner::run_generate(&cfg, &dir)
        }
        Command::Decompose {
            file,
            n,
            bypass_demod,
            json,
            config,
        } => {
            let cfg = load(&config)?;
            runner::run_decompose_file(&file, n, bypass_demod, json, &cfg)
        }
        Command::Experiment {
            config,
            seed,
            workers,
            bypass_demod,
            out,
        } => {
            let mut cfg = load(&config)?;
            if let Some(seed) = seed {
                cfg.scenario.master_seed = seed;
            }
            if let Some(workers) = workers {
                cfg.experiment.workers = workers;
            }
            if bypass_demod {
                cfg.experiment.demod = config::DemodMode::Bypass;
            }
            let dir = out.unwrap_or_else(|| cfg.experiment.output_dir.clone());
            runner::run_experiment(&cfg, &dir)
        }
    }
}

fn main() -> ExitCode {
    // clap's own exit code for usage errors is 2; the convention here is
    // 1 = usage, 2 = runtime, so parsing errors are mapped manually.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
