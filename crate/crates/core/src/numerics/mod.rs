//! Dense complex linear algebra: state vectors, square matrices and their
//! eigendecompositions, plus seeded random streams and GUE sampling.

mod eigen;
mod gue;

pub use eigen::{hermitian_eig, hermitian_expm, unitary_eig, EigenSystem, SpectrumKind};
pub use gue::{sample_gue, sample_gue_unscaled, RngStream};

use ndarray::{Array1, Array2, Axis};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tolerance for the `normalized` flag on state vectors.
pub const NORM_TOL: f64 = 1e-10;

/// A complex amplitude vector over a computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    amps: Vec<C64>,
}

impl ComplexVector {
    pub fn new(amps: Vec<C64>) -> Self {
        assert!(!amps.is_empty(), "vector dimension must be positive");
        Self { amps }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![C64::new(0.0, 0.0); dim])
    }

    /// Computational basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.amps[index] = C64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.amps
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    /// Rescales to unit norm. A zero vector is left untouched.
    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
    }

    pub fn scale(&mut self, z: C64) {
        self.amps.iter_mut().for_each(|a| *a *= z);
    }

    /// `<self|other>`, conjugating `self`.
    pub fn inner(&self, other: &ComplexVector) -> Result<C64> {
        inner_product(self, other)
    }

    pub fn max_abs_diff(&self, other: &ComplexVector) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl From<Array1<C64>> for ComplexVector {
    fn from(a: Array1<C64>) -> Self {
        Self::new(a.to_vec())
    }
}

/// `<a|b>` with conjugation on the first argument.
pub fn inner_product(a: &ComplexVector, b: &ComplexVector) -> Result<C64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// A square dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    entries: Array2<C64>,
}

impl ComplexMatrix {
    pub fn new(entries: Array2<C64>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c || r == 0 {
            return Err(Error::InvalidParameter(format!("matrix must be square and non-empty, got {r}x{c}")));
        }
        Ok(Self { entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { entries: Array2::zeros((dim, dim)) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { entries: Array2::eye(dim) }
    }

    pub fn from_fn(dim: usize, f: impl FnMut((usize, usize)) -> C64) -> Self {
        Self { entries: Array2::from_shape_fn((dim, dim), f) }
    }

    /// Diagonal matrix with the given entries.
    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.entries[[i, i]] = *d;
        }
        m
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let dim = columns.len();
        let mut m = Self::zeros(dim);
        for (j, col) in columns.iter().enumerate() {
            if col.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: col.dim() });
            }
            m.entries.column_mut(j).iter_mut().zip(col.as_slice()).for_each(|(e, v)| *e = *v);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn as_array(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn as_array_mut(&mut self) -> &mut Array2<C64> {
        &mut self.entries
    }

    pub fn into_array(self) -> Array2<C64> {
        self.entries
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::new(self.entries.column(j).to_vec())
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        Self { entries: self.entries.t().mapv(|z| z.conj()) }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(Self { entries: self.entries.dot(&other.entries) })
    }

    pub fn matvec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.dim() });
        }
        let out =
            self.entries.axis_iter(Axis(0)).map(|row| row.iter().zip(v.as_slice()).map(|(a, b)| a * b).sum()).collect();
        Ok(ComplexVector::new(out))
    }

    pub fn scaled(&self, z: C64) -> ComplexMatrix {
        Self { entries: self.entries.mapv(|e| e * z) }
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        Self { entries: &self.entries + &other.entries }
    }

    /// `max |M - M^dagger|` over entries.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut err = 0.0f64;
        for i in 0..n {
            for j in i..n {
                err = err.max((self.entries[[i, j]] - self.entries[[j, i]].conj()).norm());
            }
        }
        err
    }

    /// `max |U^dagger U - I|` over entries.
    pub fn unitarity_error(&self) -> f64 {
        let gram = self.adjoint().entries.dot(&self.entries);
        max_deviation_from_identity(&gram)
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        self.entries.iter().zip(other.entries.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Spectral (operator 2-) norm of a Hermitian matrix.
    pub fn hermitian_spectral_norm(&self) -> Result<f64> {
        let eig = hermitian_eig(self)?;
        let lo = eig.values.first().copied().unwrap_or(0.0);
        let hi = eig.values.last().copied().unwrap_or(0.0);
        Ok(lo.abs().max(hi.abs()))
    }
}

pub(crate) fn max_deviation_from_identity(m: &Array2<C64>) -> f64 {
    let mut err = 0.0f64;
    for ((i, j), z) in m.indexed_iter() {
        let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
        err = err.max((z - target).norm());
    }
    err
}
