//! Fidelity amplitude `f(t) = <psi| (U-^dagger)^t (U+)^t |psi>` over integer
//! kick numbers, the dephasing channel it induces on the qubit, and long-time
//! averages.

use std::io::Write;

use num_complex::Complex64 as C64;

use crate::chain::{ChainParams, FloquetPair};
use crate::error::{Error, Result};
use crate::numerics::ComplexVector;

#[derive(Clone, Debug, PartialEq)]
pub struct FidelitySeries {
    /// `f(t)` for `t = 0..=t_cut`.
    pub f: Vec<C64>,
    pub t_cut: usize,
    pub params_fingerprint: u64,
}

impl FidelitySeries {
    /// Wraps an externally produced amplitude sequence (e.g. a synthetic test
    /// series). No dynamics-specific invariants are enforced beyond length.
    pub fn from_raw(f: Vec<C64>) -> Result<Self> {
        if f.len() < 2 {
            return Err(Error::InvalidParameter("a series needs at least t = 0 and t = 1".into()));
        }
        Ok(Self { t_cut: f.len() - 1, f, params_fingerprint: 0 })
    }

    /// Real positive series `f(t) = F(t)`.
    pub fn from_amplitudes(amps: &[f64]) -> Result<Self> {
        Self::from_raw(amps.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// `F(t) = |f(t)|`.
    pub fn amplitude(&self) -> Vec<f64> {
        self.f.iter().map(|z| z.norm()).collect()
    }

    /// Fidelity `|f(t)|^2`.
    pub fn fidelity(&self) -> Vec<f64> {
        self.f.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Series restricted to `t = 0..=t_cut`.
    pub fn prefix(&self, t_cut: usize) -> FidelitySeries {
        let end = t_cut.min(self.t_cut);
        Self { f: self.f[..=end].to_vec(), t_cut: end, params_fingerprint: self.params_fingerprint }
    }

    pub fn snapshot(&self, t: usize) -> ChannelSnapshot {
        ChannelSnapshot { f_value: self.f[t] }
    }

    /// Plain-text dump, one `t Re(f) Im(f)` line per kick, 12 significant digits.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        for (t, z) in self.f.iter().enumerate() {
            writeln!(out, "{} {:.11e} {:.11e}", t, z.re, z.im)?;
        }
        Ok(())
    }
}

/// FNV-1a over the chain parameters and the initial state.
fn fingerprint(params: &ChainParams, psi: &ComplexVector) -> u64 {
    const PRIME: u64 = 0x100000001b3;
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |x: u64| {
        for byte in x.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(PRIME);
        }
    };
    eat(params.n_qubits as u64);
    eat(params.b_perp.to_bits());
    eat(params.b_par.to_bits());
    eat(params.epsilon.to_bits());
    eat(params.coupling as u64);
    eat(params.gue_seed.unwrap_or(u64::MAX));
    for a in psi.as_slice() {
        eat(a.re.to_bits());
        eat(a.im.to_bits());
    }
    h
}

/// Evolves `a_t = (U+)^t psi` and `b_t = (U-)^t psi` one kick at a time and
/// records `f(t) = <b_t|a_t>`.
pub fn fidelity_series(pair: &FloquetPair, psi: &ComplexVector, t_cut: usize) -> Result<FidelitySeries> {
    let dim = pair.plus.dim();
    if psi.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: psi.dim() });
    }
    if t_cut < 1 {
        return Err(Error::InvalidParameter("t_cut must be >= 1".into()));
    }
    if !psi.is_normalized() {
        return Err(Error::InvalidParameter(format!("initial state not normalized (norm^2 = {})", psi.norm_sqr())));
    }
    let params_fingerprint = fingerprint(&pair.params, psi);
    let one = C64::new(1.0, 0.0);

    // Identical propagators: f(t) = <psi|psi> = 1 at every step.
    if pair.is_trivial() {
        return Ok(FidelitySeries { f: vec![one; t_cut + 1], t_cut, params_fingerprint });
    }

    let mut f = Vec::with_capacity(t_cut + 1);
    f.push(one);
    let mut a = psi.as_slice().to_vec();
    let mut b = a.clone();
    for _ in 0..t_cut {
        pair.plus.apply_in_place(&mut a)?;
        pair.minus.apply_in_place(&mut b)?;
        f.push(b.iter().zip(&a).map(|(x, y)| x.conj() * y).sum());
    }
    Ok(FidelitySeries { f, t_cut, params_fingerprint })
}

/// The qubit dephasing channel at one instant, parametrised by `f(t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelSnapshot {
    pub f_value: C64,
}

impl ChannelSnapshot {
    /// Pauli-basis matrix, rows and columns ordered `(1, sx, sy, sz)`.
    /// Coherences rotate and shrink as `[[Re f, -Im f], [Im f, Re f]]`.
    pub fn channel_matrix(&self) -> [[f64; 4]; 4] {
        let (re, im) = (self.f_value.re, self.f_value.im);
        [[1.0, 0.0, 0.0, 0.0], [0.0, re, -im, 0.0], [0.0, im, re, 0.0], [0.0, 0.0, 0.0, 1.0]]
    }

    /// Eigenvalues of the unit-trace Choi matrix, ascending.
    pub fn choi_eigenvalues(&self) -> [f64; 4] {
        choi_eigenvalues(self.f_value)
    }

    pub fn is_completely_positive(&self, tol: f64) -> bool {
        self.choi_eigenvalues().iter().all(|&x| x >= -tol)
    }
}

/// Choi spectrum of a dephasing map with coherence multiplier `lambda`:
/// `{0, 0, (1 - |lambda|)/2, (1 + |lambda|)/2}`.
pub fn choi_eigenvalues(lambda: C64) -> [f64; 4] {
    let m = lambda.norm();
    [0.0, 0.0, 0.5 * (1.0 - m), 0.5 * (1.0 + m)]
}

/// Trace norm of the Choi matrix of the dephasing map with multiplier
/// `lambda`; equals `max(1, |lambda|)`, exceeding 1 exactly when the map is
/// not completely positive.
pub fn choi_trace_norm(lambda: C64) -> f64 {
    choi_eigenvalues(lambda).iter().map(|x| x.abs()).sum()
}

/// Multiplier of the intermediate map between kicks `t0 <= t1`: `f(t1)/f(t0)`.
pub fn intermediate_multiplier(series: &FidelitySeries, t0: usize, t1: usize) -> C64 {
    series.f[t1] / series.f[t0]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticFidelity {
    /// Window average of `|f|`.
    pub mean_f: f64,
    /// Window average of `|f|^2`.
    pub mean_f2: f64,
    /// Inclusive `(start, end)` kick indices.
    pub window: (usize, usize),
}

/// Tail average over `[ceil(t_cut/2), t_cut]`.
pub fn asymptotic_fidelity(series: &FidelitySeries) -> Result<AsymptoticFidelity> {
    asymptotic_fidelity_tail(series, 0.5)
}

/// Average over the last `fraction` of the run: `[t_cut - floor(fraction t_cut), t_cut]`.
pub fn asymptotic_fidelity_tail(series: &FidelitySeries, fraction: f64) -> Result<AsymptoticFidelity> {
    if series.t_cut < 2 {
        return Err(Error::InvalidParameter("asymptotic average needs t_cut >= 2".into()));
    }
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!("tail fraction must lie in (0, 1], got {fraction}")));
    }
    let start = series.t_cut - (fraction * series.t_cut as f64).floor() as usize;
    let window = &series.f[start..=series.t_cut];
    let n = window.len() as f64;
    let mean_f = window.iter().map(|z| z.norm()).sum::<f64>() / n;
    let mean_f2 = window.iter().map(|z| z.norm_sqr()).sum::<f64>() / n;
    Ok(AsymptoticFidelity { mean_f, mean_f2, window: (start, series.t_cut) })
}
