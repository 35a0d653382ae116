use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use crate::chain::{shift_index, FloquetOperator};
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, ComplexVector};

/// Sector blocks whose unitarity error exceeds this are rejected as symmetry-breaking.
pub const SECTOR_UNITARY_TOL: f64 = 1e-9;

/// Momentum-`k` eigenspace of the cyclic shift, spanned by
/// `|k; r> = p^{-1/2} sum_{j<p} e^{-2 pi i k j / N} T^j |r>` over orbit
/// representatives `r` of period `p` with `k p = 0 mod N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorBasis {
    pub n_qubits: usize,
    pub k: usize,
    /// `(representative, period)`, representative = smallest index in the orbit.
    pub orbit_reps: Vec<(usize, usize)>,
}

impl SectorBasis {
    pub fn dim(&self) -> usize {
        self.orbit_reps.len()
    }

    fn phase(&self, j: usize) -> C64 {
        C64::from_polar(1.0, -TAU * (self.k * j) as f64 / self.n_qubits as f64)
    }

    /// Full-space vector of basis element `row`.
    pub fn embed_basis(&self, row: usize) -> ComplexVector {
        let mut v = ComplexVector::zeros(1 << self.n_qubits);
        self.accumulate(row, C64::new(1.0, 0.0), v.as_mut_slice());
        v
    }

    fn accumulate(&self, row: usize, coeff: C64, out: &mut [C64]) {
        let (rep, period) = self.orbit_reps[row];
        let norm = 1.0 / (period as f64).sqrt();
        let mut b = rep;
        for j in 0..period {
            out[b] += coeff * self.phase(j) * norm;
            b = shift_index(b, self.n_qubits);
        }
    }

    /// Full-space vector `sum_r coords[r] |k; r>`.
    pub fn embed(&self, coords: &ComplexVector) -> Result<ComplexVector> {
        if coords.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: coords.dim() });
        }
        let mut v = ComplexVector::zeros(1 << self.n_qubits);
        for (row, c) in coords.as_slice().iter().enumerate() {
            self.accumulate(row, *c, v.as_mut_slice());
        }
        Ok(v)
    }

    /// Coordinates `<k; r|state>` of a full-space state in this sector.
    pub fn project(&self, state: &ComplexVector) -> Result<ComplexVector> {
        let full = 1usize << self.n_qubits;
        if state.dim() != full {
            return Err(Error::DimensionMismatch { expected: full, got: state.dim() });
        }
        let amps = state.as_slice();
        let coords = self
            .orbit_reps
            .iter()
            .map(|&(rep, period)| {
                let mut acc = C64::new(0.0, 0.0);
                let mut b = rep;
                for j in 0..period {
                    acc += self.phase(j).conj() * amps[b];
                    b = shift_index(b, self.n_qubits);
                }
                acc / (period as f64).sqrt()
            })
            .collect();
        Ok(ComplexVector::new(coords))
    }
}

/// Cyclic-shift orbits of all `2^N` basis indices as `(representative, period)`.
pub fn orbits(n_qubits: usize) -> Vec<(usize, usize)> {
    let dim = 1usize << n_qubits;
    let mut seen = vec![false; dim];
    let mut out = Vec::new();
    for b in 0..dim {
        if seen[b] {
            continue;
        }
        let mut period = 0;
        let mut c = b;
        loop {
            seen[c] = true;
            period += 1;
            c = shift_index(c, n_qubits);
            if c == b {
                break;
            }
        }
        out.push((b, period));
    }
    out
}

pub fn build_sector(n_qubits: usize, k: usize) -> Result<SectorBasis> {
    if !(1..=24).contains(&n_qubits) {
        return Err(Error::InvalidParameter(format!("n_qubits must lie in [1, 24], got {n_qubits}")));
    }
    if k >= n_qubits {
        return Err(Error::InvalidParameter(format!("k must lie in [0, {n_qubits}), got {k}")));
    }
    let orbit_reps = orbits(n_qubits).into_iter().filter(|&(_, p)| (k * p).is_multiple_of(n_qubits)).collect();
    Ok(SectorBasis { n_qubits, k, orbit_reps })
}

/// Block `<k; r|U|k; c>` of a translation-invariant operator. The block's
/// unitarity certifies that `U` leaves the sector invariant.
pub fn sector_matrix(op: &FloquetOperator, basis: &SectorBasis) -> Result<ComplexMatrix> {
    if op.n_qubits() != basis.n_qubits {
        return Err(Error::DimensionMismatch { expected: basis.n_qubits, got: op.n_qubits() });
    }
    let d = basis.dim();
    let mut m = ComplexMatrix::zeros(d);
    let mut buf = vec![C64::new(0.0, 0.0); 1 << basis.n_qubits];
    for col in 0..d {
        buf.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
        basis.accumulate(col, C64::new(1.0, 0.0), &mut buf);
        op.apply_in_place(&mut buf)?;
        let coords = basis.project(&ComplexVector::new(buf.clone()))?;
        m.as_array_mut().column_mut(col).iter_mut().zip(coords.as_slice()).for_each(|(e, v)| *e = *v);
    }
    let err = m.unitarity_error();
    if err > SECTOR_UNITARY_TOL {
        return Err(Error::SymmetryViolation(err));
    }
    Ok(m)
}
