use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use kicknm_core::sweep::{
    run_saturation, run_series, run_spectral, run_sweep, write_saturation_csv, write_spectral_report, write_sweep_csv,
    RunConfig,
};
use kicknm_core::CoherentSpec;

/// Non-Markovianity of a qubit dephasing under a kicked Ising chain.
///
/// Worker threads default to the available parallelism; set KICKNM_THREADS to override.
#[derive(Parser)]
#[command(name = "kicknm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measures, IPR and asymptotic fidelity over the coherent-state grid (CSV).
    Sweep { config: PathBuf },
    /// Level-spacing histogram and Brody fit of U+.
    Spectral { config: PathBuf },
    /// Measures against the time cutoff for one coherent state (CSV).
    Saturate {
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        /// Comma-separated, strictly ascending cutoffs.
        #[arg(long, value_delimiter = ',', required = true)]
        checkpoints: Vec<usize>,
    },
    /// The fidelity amplitude series `t re im` for one coherent state.
    Series {
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
    },
}

fn load(path: &Path) -> Result<RunConfig> {
    RunConfig::from_file(path).with_context(|| format!("reading config {}", path.display()))
}

/// Writes the whole output to `output_path`, or to stdout when unset.
fn emit(cfg: &RunConfig, write: impl FnOnce(&mut dyn Write) -> kicknm_core::Result<()>) -> Result<()> {
    match &cfg.output_path {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut out = BufWriter::new(file);
            write(&mut out)?;
            out.flush()?;
            log::info!("wrote {}", path.display());
        }
        None => {
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            write(&mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep { config } => {
            let cfg = load(&config)?;
            let rows = run_sweep(&cfg)?;
            emit(&cfg, |out| write_sweep_csv(&cfg, &rows, out))
        }
        Command::Spectral { config } => {
            let cfg = load(&config)?;
            let report = run_spectral(&cfg)?;
            log::info!(
                "brody q = {:.4}, KS Poisson = {:.4}, KS Wigner = {:.4}",
                report.brody_q,
                report.ks_poisson,
                report.ks_wigner
            );
            emit(&cfg, |out| write_spectral_report(&report, out))
        }
        Command::Saturate { config, theta, phi, checkpoints } => {
            let cfg = load(&config)?;
            let rows = run_saturation(&cfg, CoherentSpec::new(theta, phi)?, &checkpoints)?;
            emit(&cfg, |out| write_saturation_csv(&rows, out))
        }
        Command::Series { config, theta, phi } => {
            let cfg = load(&config)?;
            let series = run_series(&cfg, CoherentSpec::new(theta, phi)?)?;
            emit(&cfg, |out| series.write_text(out))
        }
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
