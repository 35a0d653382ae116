//! Parameter sweeps over coherent states, spectral reports and saturation
//! curves, with deterministic CSV output.

mod config;

use std::io::Write;

use rayon::prelude::*;

use crate::chain::{build_floquet_pair, FloquetPair};
use crate::coherent::{build_coherent_state, CoherentSpec};
use crate::dynamics::{asymptotic_fidelity_tail, fidelity_series, FidelitySeries};
use crate::error::{Error, Result};
use crate::measures::{compute_report, prefix_reports, NmReport};
use crate::numerics::RngStream;
use crate::spectral::{spacing_statistics, write_histogram, Eigenbasis, SpectralReport};

pub use config::{RunConfig, OP_COUNT_WARNING};

/// Environment variable holding the worker count.
pub const THREADS_ENV: &str = "KICKNM_THREADS";

pub const SWEEP_HEADER: &str =
    "theta,phi,hemisphere,ipr,blp,rhp,nd_max,nd_avg,ng_max,ng_avg,f_asym,f_amp_asym,clamp_events";
pub const SATURATION_HEADER: &str = "t_cut,blp,rhp,blp_norm,rhp_norm,nd_max,nd_avg,ng_max,ng_avg";

/// Relative slack for the row identities checked before writing.
const ROW_CHECK_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub spec: CoherentSpec,
    pub ipr: f64,
    pub blp: f64,
    pub rhp: f64,
    pub nd_max: f64,
    pub nd_avg: f64,
    pub ng_max: f64,
    pub ng_avg: f64,
    /// Tail average of `|f|^2`.
    pub f_asym: f64,
    /// Tail average of `|f|`.
    pub f_amp_asym: f64,
    /// Summed over GUE samples.
    pub clamp_events: usize,
}

impl SweepRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{:.9e},{:.9e},{},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{}",
            self.spec.theta,
            self.spec.phi,
            self.spec.hemisphere().tag(),
            self.ipr,
            self.blp,
            self.rhp,
            self.nd_max,
            self.nd_avg,
            self.ng_max,
            self.ng_avg,
            self.f_asym,
            self.f_amp_asym,
            self.clamp_events
        )
    }

    /// `ng_max = rhp` (with `rhp` rescaled by `rhp_scale` when normalized) and `nd_avg <= nd_max`.
    pub fn check(&self, rhp_scale: f64) -> Result<()> {
        let rhp = self.rhp * rhp_scale;
        if (self.ng_max - rhp).abs() > ROW_CHECK_TOL * rhp.abs().max(1.0) {
            return Err(Error::Invariant(format!(
                "ng_max {} != rhp {} at theta={}, phi={}",
                self.ng_max, rhp, self.spec.theta, self.spec.phi
            )));
        }
        if self.nd_avg > self.nd_max + ROW_CHECK_TOL {
            return Err(Error::Invariant(format!(
                "nd_avg {} > nd_max {} at theta={}, phi={}",
                self.nd_avg, self.nd_max, self.spec.theta, self.spec.phi
            )));
        }
        Ok(())
    }
}

/// Worker count from `KICKNM_THREADS`, else the available parallelism.
pub fn worker_count() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::InvalidParameter(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count()?)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))
}

/// Floquet pair of GUE sample `m`; other couplings ignore `m`.
pub fn sample_pair(cfg: &RunConfig, m: usize) -> Result<FloquetPair> {
    build_floquet_pair(&cfg.chain_params(), &mut RngStream::new(cfg.seed, m as u64))
}

struct PointResult {
    ipr: f64,
    report: NmReport,
    f_asym: f64,
    f_amp_asym: f64,
}

fn evaluate_point(cfg: &RunConfig, pair: &FloquetPair, basis: &Eigenbasis, spec: CoherentSpec) -> Result<PointResult> {
    let psi = build_coherent_state(spec, cfg.n_qubits)?;
    let series = fidelity_series(pair, &psi, cfg.t_cut)?;
    let report = compute_report(&series, cfg.normalize_by_tcut);
    let asym = asymptotic_fidelity_tail(&series, cfg.tail_window_fraction)?;
    let ipr = basis.ipr(&psi)?;
    Ok(PointResult { ipr: ipr.value, report, f_asym: asym.mean_f2, f_amp_asym: asym.mean_f })
}

/// One row per grid point in grid order. For `gue_samples > 1` every column
/// except `clamp_events` is the mean over samples.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let ops = cfg.estimated_ops();
    if ops > OP_COUNT_WARNING {
        log::warn!("sweep needs about {ops:.1e} amplitude operations");
    }
    let specs = cfg.grid.enumerate()?;
    let pool = thread_pool()?;
    let mut sums: Vec<SweepRow> = specs
        .iter()
        .map(|&spec| SweepRow {
            spec,
            ipr: 0.0,
            blp: 0.0,
            rhp: 0.0,
            nd_max: 0.0,
            nd_avg: 0.0,
            ng_max: 0.0,
            ng_avg: 0.0,
            f_asym: 0.0,
            f_amp_asym: 0.0,
            clamp_events: 0,
        })
        .collect();

    for m in 0..cfg.gue_samples {
        let pair = sample_pair(cfg, m)?;
        let basis = Eigenbasis::build(&pair.plus, cfg.resolved_ipr_basis())?;
        log::info!("sample {}/{}: {} grid points", m + 1, cfg.gue_samples, specs.len());
        let results: Vec<PointResult> = pool.install(|| {
            specs.par_iter().map(|&spec| evaluate_point(cfg, &pair, &basis, spec)).collect::<Result<_>>()
        })?;
        for (row, r) in sums.iter_mut().zip(results) {
            row.ipr += r.ipr;
            row.blp += r.report.blp;
            row.rhp += r.report.rhp;
            row.nd_max += r.report.nd_max;
            row.nd_avg += r.report.nd_avg;
            row.ng_max += r.report.ng_max;
            row.ng_avg += r.report.ng_avg;
            row.f_asym += r.f_asym;
            row.f_amp_asym += r.f_amp_asym;
            row.clamp_events += r.report.clamp_events;
        }
    }

    if cfg.gue_samples > 1 {
        let n = cfg.gue_samples as f64;
        for row in &mut sums {
            for x in [
                &mut row.ipr,
                &mut row.blp,
                &mut row.rhp,
                &mut row.nd_max,
                &mut row.nd_avg,
                &mut row.ng_max,
                &mut row.ng_avg,
                &mut row.f_asym,
                &mut row.f_amp_asym,
            ] {
                *x /= n;
            }
        }
    }
    Ok(sums)
}

/// Checks every row and writes the CSV with an LF-terminated header.
pub fn write_sweep_csv<W: Write>(cfg: &RunConfig, rows: &[SweepRow], mut out: W) -> Result<()> {
    let rhp_scale = if cfg.normalize_by_tcut { cfg.t_cut as f64 } else { 1.0 };
    for row in rows {
        row.check(rhp_scale)?;
    }
    writeln!(out, "{SWEEP_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    Ok(())
}

/// Level statistics of `U+` pooled over the usable momentum sectors.
pub fn run_spectral(cfg: &RunConfig) -> Result<SpectralReport> {
    cfg.validate()?;
    let pair = sample_pair(cfg, 0)?;
    let pool = thread_pool()?;
    pool.install(|| spacing_statistics(&pair.plus, cfg.n_qubits))
}

/// Fit summary as `# key = value` lines followed by the spacing histogram.
pub fn write_spectral_report<W: Write>(report: &SpectralReport, mut out: W) -> Result<()> {
    let sectors: Vec<String> = report.sectors_used.iter().map(|k| k.to_string()).collect();
    writeln!(out, "# sectors = {}", sectors.join(" "))?;
    writeln!(out, "# spacings = {}", report.spacings.len())?;
    writeln!(out, "# brody_q = {:.9e}", report.brody_q)?;
    writeln!(out, "# brody_loglik = {:.9e}", report.brody_loglik)?;
    writeln!(out, "# ks_poisson = {:.9e}", report.ks_poisson)?;
    writeln!(out, "# ks_wigner = {:.9e}", report.ks_wigner)?;
    writeln!(out, "# ks_brody = {:.9e}", report.ks_brody)?;
    writeln!(out, "# s density")?;
    write_histogram(&report.spacings, out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SaturationRow {
    pub t_cut: usize,
    pub blp: f64,
    pub rhp: f64,
    pub blp_norm: f64,
    pub rhp_norm: f64,
    pub nd_max: f64,
    pub nd_avg: f64,
    pub ng_max: f64,
    pub ng_avg: f64,
}

impl SaturationRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e}",
            self.t_cut,
            self.blp,
            self.rhp,
            self.blp_norm,
            self.rhp_norm,
            self.nd_max,
            self.nd_avg,
            self.ng_max,
            self.ng_avg
        )
    }
}

/// Measures on every prefix of one evolution up to the largest checkpoint.
/// GUE runs average over samples like `run_sweep`.
pub fn run_saturation(cfg: &RunConfig, spec: CoherentSpec, checkpoints: &[usize]) -> Result<Vec<SaturationRow>> {
    cfg.validate()?;
    if checkpoints.is_empty() || checkpoints[0] == 0 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(format!(
            "checkpoints must be positive and strictly ascending, got {checkpoints:?}"
        )));
    }
    let t_max = *checkpoints.last().unwrap();
    let psi = build_coherent_state(spec, cfg.n_qubits)?;
    let mut rows: Vec<SaturationRow> = checkpoints
        .iter()
        .map(|&t_cut| SaturationRow {
            t_cut,
            blp: 0.0,
            rhp: 0.0,
            blp_norm: 0.0,
            rhp_norm: 0.0,
            nd_max: 0.0,
            nd_avg: 0.0,
            ng_max: 0.0,
            ng_avg: 0.0,
        })
        .collect();
    for m in 0..cfg.gue_samples {
        let pair = sample_pair(cfg, m)?;
        let amp = fidelity_series(&pair, &psi, t_max)?.amplitude();
        for (row, r) in rows.iter_mut().zip(prefix_reports(&amp, checkpoints)) {
            row.blp += r.blp;
            row.rhp += r.rhp;
            row.nd_max += r.nd_max;
            row.nd_avg += r.nd_avg;
            row.ng_max += r.ng_max;
            row.ng_avg += r.ng_avg;
        }
    }
    let n = cfg.gue_samples as f64;
    for row in &mut rows {
        if cfg.gue_samples > 1 {
            for x in [&mut row.blp, &mut row.rhp, &mut row.nd_max, &mut row.nd_avg, &mut row.ng_max, &mut row.ng_avg] {
                *x /= n;
            }
        }
        row.blp_norm = row.blp / row.t_cut as f64;
        row.rhp_norm = row.rhp / row.t_cut as f64;
    }
    Ok(rows)
}

pub fn write_saturation_csv<W: Write>(rows: &[SaturationRow], mut out: W) -> Result<()> {
    writeln!(out, "{SATURATION_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    Ok(())
}

/// Fidelity amplitude series of one coherent state (first GUE sample for VGUE).
pub fn run_series(cfg: &RunConfig, spec: CoherentSpec) -> Result<FidelitySeries> {
    cfg.validate()?;
    let pair = sample_pair(cfg, 0)?;
    fidelity_series(&pair, &build_coherent_state(spec, cfg.n_qubits)?, cfg.t_cut)
}
