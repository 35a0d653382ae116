use std::f64::consts::{PI, TAU};
use std::io::Write;

use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use super::sector::{build_sector, sector_matrix};
use crate::chain::FloquetOperator;
use crate::error::{Error, Result};
use crate::numerics::{unitary_eig, RngStream};

/// Bounds of the Brody parameter search.
pub const BRODY_Q_MAX: f64 = 1.2;
pub const BRODY_TOL: f64 = 1e-4;
pub const BRODY_MIN_SAMPLES: usize = 50;
/// Spacings are floored here before taking `log s`.
const SPACING_FLOOR: f64 = 1e-300;

pub const HIST_BIN_WIDTH: f64 = 0.1;
pub const HIST_MAX: f64 = 5.0;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport {
    /// Unfolded nearest-neighbour spacings pooled over sectors.
    pub spacings: Vec<f64>,
    pub sectors_used: Vec<usize>,
    pub brody_q: f64,
    pub brody_loglik: f64,
    pub ks_poisson: f64,
    pub ks_wigner: f64,
    pub ks_brody: f64,
}

/// Circular nearest-neighbour spacings of eigenphases, including the
/// wrap-around gap, scaled by `d / 2 pi` so that their mean is exactly 1.
pub fn unfolded_spacings(phases: &[f64]) -> Vec<f64> {
    let d = phases.len();
    if d == 0 {
        return Vec::new();
    }
    let mut sorted = phases.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let scale = d as f64 / TAU;
    let mut out: Vec<f64> = sorted.windows(2).map(|w| (w[1] - w[0]) * scale).collect();
    out.push((sorted[0] + TAU - sorted[d - 1]) * scale);
    out
}

/// Sectors used for level statistics: all `k` except 0 and, for even `N`, `N/2`,
/// where the reflection symmetry is not resolved.
pub fn statistics_sectors(n_qubits: usize) -> Vec<usize> {
    (0..n_qubits).filter(|&k| k != 0 && !(n_qubits.is_multiple_of(2) && k == n_qubits / 2)).collect()
}

pub fn spacing_statistics(op: &FloquetOperator, n_qubits: usize) -> Result<SpectralReport> {
    if op.n_qubits() != n_qubits {
        return Err(Error::DimensionMismatch { expected: n_qubits, got: op.n_qubits() });
    }
    let sectors = statistics_sectors(n_qubits);
    if sectors.is_empty() {
        return Err(Error::InvalidParameter(format!("no usable momentum sectors for N = {n_qubits}")));
    }
    let per_sector: Vec<Vec<f64>> = sectors
        .par_iter()
        .map(|&k| {
            let basis = build_sector(n_qubits, k)?;
            let block = sector_matrix(op, &basis)?;
            Ok(unfolded_spacings(&unitary_eig(&block)?.values))
        })
        .collect::<Result<_>>()?;
    let spacings: Vec<f64> = per_sector.into_iter().flatten().collect();
    let (brody_q, brody_loglik) = brody_fit(&spacings)?;
    Ok(SpectralReport {
        ks_poisson: ks_distance(&spacings, poisson_cdf),
        ks_wigner: ks_distance(&spacings, wigner_cdf),
        ks_brody: ks_distance(&spacings, |s| brody_cdf(s, brody_q)),
        spacings,
        sectors_used: sectors,
        brody_q,
        brody_loglik,
    })
}

pub fn poisson_cdf(s: f64) -> f64 {
    1.0 - (-s).exp()
}

/// CDF of the Wigner surmise `(pi/2) s exp(-pi s^2 / 4)`.
pub fn wigner_cdf(s: f64) -> f64 {
    1.0 - (-PI * s * s / 4.0).exp()
}

/// Scale `alpha(q) = Gamma((q+2)/(q+1))^(q+1)` of the Brody distribution.
pub fn brody_alpha(q: f64) -> f64 {
    ((q + 1.0) * ln_gamma((q + 2.0) / (q + 1.0))).exp()
}

pub fn brody_pdf(s: f64, q: f64) -> f64 {
    let a = brody_alpha(q);
    (q + 1.0) * a * s.powf(q) * (-a * s.powf(q + 1.0)).exp()
}

pub fn brody_cdf(s: f64, q: f64) -> f64 {
    1.0 - (-brody_alpha(q) * s.max(0.0).powf(q + 1.0)).exp()
}

/// Inverse-CDF draw from the Brody distribution.
pub fn sample_brody(q: f64, n: usize, rng: &mut RngStream) -> Vec<f64> {
    let a = brody_alpha(q);
    (0..n).map(|_| (-(1.0 - rng.uniform()).ln() / a).powf(1.0 / (q + 1.0))).collect()
}

pub fn brody_loglik(spacings: &[f64], q: f64) -> f64 {
    let ln_alpha = (q + 1.0) * ln_gamma((q + 2.0) / (q + 1.0));
    let alpha = ln_alpha.exp();
    let constant = (q + 1.0).ln() + ln_alpha;
    spacings
        .iter()
        .map(|&s| {
            let s = s.max(SPACING_FLOOR);
            constant + q * s.ln() - alpha * s.powf(q + 1.0)
        })
        .sum()
}

/// Maximum-likelihood Brody parameter over `[0, 1.2]` by golden-section search.
pub fn brody_fit(spacings: &[f64]) -> Result<(f64, f64)> {
    if spacings.len() < BRODY_MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "Brody fit needs at least {BRODY_MIN_SAMPLES} spacings, got {}",
            spacings.len()
        )));
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, BRODY_Q_MAX);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = brody_loglik(spacings, c);
    let mut fd = brody_loglik(spacings, d);
    while b - a > BRODY_TOL {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = brody_loglik(spacings, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = brody_loglik(spacings, d);
        }
    }
    // compare the bracket midpoint with the endpoints, since the optimum may sit on a bound
    let candidates = [0.5 * (a + b), 0.0, BRODY_Q_MAX];
    let best = candidates
        .iter()
        .map(|&q| (q, brody_loglik(spacings, q)))
        .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
        .unwrap();
    Ok(best)
}

/// Kolmogorov-Smirnov distance between the empirical distribution of `samples` and `cdf`.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Density histogram `(bin center, density)` with bins of width 0.1 over `[0, 5]`,
/// normalized by the total number of spacings.
pub fn spacing_histogram(spacings: &[f64]) -> Vec<(f64, f64)> {
    let bins = (HIST_MAX / HIST_BIN_WIDTH).round() as usize;
    let mut counts = vec![0usize; bins];
    for &s in spacings {
        if (0.0..HIST_MAX).contains(&s) {
            counts[((s / HIST_BIN_WIDTH) as usize).min(bins - 1)] += 1;
        }
    }
    let total = spacings.len().max(1) as f64;
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| ((i as f64 + 0.5) * HIST_BIN_WIDTH, c as f64 / (total * HIST_BIN_WIDTH)))
        .collect()
}

pub fn write_histogram<W: Write>(spacings: &[f64], mut out: W) -> Result<()> {
    for (center, density) in spacing_histogram(spacings) {
        writeln!(out, "{center:.2} {density:.9e}")?;
    }
    Ok(())
}
