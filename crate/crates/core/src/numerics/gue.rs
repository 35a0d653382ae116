use num_complex::Complex64 as C64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// A reproducible random stream identified by `(seed, stream_index)`.
///
/// Each concurrent task derives its own stream by index instead of sharing one.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_index);
        Self { seed, stream_index, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform sample in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Complex Gaussian with `E|z|^2 = 1`.
    pub fn complex_normal(&mut self) -> C64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        C64::new(s * self.normal(), s * self.normal())
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// `H = (A + A^dagger) / 2` with i.i.d. standard complex Gaussian entries in `A`.
///
/// Off-diagonal entries have `E|H_ij|^2 = 1/2`, so the spectrum follows a
/// semicircle of radius `sqrt(2 dim)`.
pub fn sample_gue_unscaled(dim: usize, rng: &mut RngStream) -> Result<ComplexMatrix> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!("GUE dimension must be >= 2, got {dim}")));
    }
    let mut a = ComplexMatrix::zeros(dim);
    for z in a.as_array_mut().iter_mut() {
        *z = rng.complex_normal();
    }
    let arr = a.as_array();
    let h = ComplexMatrix::from_fn(dim, |(i, j)| 0.5 * (arr[[i, j]] + arr[[j, i]].conj()));
    Ok(h)
}

/// GUE sample rescaled so that its spectral norm equals `log2(dim)`, the
/// qubit count of a `dim = 2^N` chain, matching the norm of the Ising term.
pub fn sample_gue(dim: usize, rng: &mut RngStream) -> Result<ComplexMatrix> {
    let h = sample_gue_unscaled(dim, rng)?;
    let norm = h.hermitian_spectral_norm()?;
    let target = (dim as f64).log2();
    Ok(h.scaled(C64::new(target / norm, 0.0)))
}
