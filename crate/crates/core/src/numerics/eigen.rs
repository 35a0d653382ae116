use std::cmp::Ordering;
use std::f64::consts::PI;

use ndarray::{Array2, ShapeBuilder};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64 as C64;

use super::{ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};

/// Maximum entrywise deviation from Hermiticity accepted on input.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Maximum `|U^dagger U - I|` accepted on input.
pub const UNITARY_TOL: f64 = 1e-9;
/// Two eigenvalues (or eigenphases) closer than this mark the spectrum degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumKind {
    /// Real eigenvalues of a Hermitian matrix.
    Hermitian,
    /// Eigenphases `theta` in `(-pi, pi]` of a unitary matrix, eigenvalue `e^{i theta}`.
    Unitary,
}

/// Eigenvalues (or eigenphases) with an orthonormal set of eigenvectors stored
/// as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub kind: SpectrumKind,
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
    /// `max_i |M v_i - lambda_i v_i|`.
    pub residual: f64,
    pub degenerate: bool,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, i: usize) -> ComplexVector {
        self.vectors.column(i)
    }

    /// Eigenvalue as a complex number: `lambda` or `e^{i theta}`.
    pub fn eigenvalue(&self, i: usize) -> C64 {
        match self.kind {
            SpectrumKind::Hermitian => C64::new(self.values[i], 0.0),
            SpectrumKind::Unitary => C64::from_polar(1.0, self.values[i]),
        }
    }

    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = self.vectors.as_array();
        let mut scaled = v.clone();
        for (j, mut col) in scaled.columns_mut().into_iter().enumerate() {
            let l = self.eigenvalue(j);
            col.mapv_inplace(|z| z * l);
        }
        let vh = v.t().mapv(|z| z.conj());
        ComplexMatrix { entries: scaled.dot(&vh) }
    }

    /// `max |V^dagger V - I|`.
    pub fn gram_error(&self) -> f64 {
        self.vectors.unitarity_error()
    }
}

fn residual(m: &Array2<C64>, values: &[C64], vectors: &Array2<C64>) -> f64 {
    let mv = m.dot(vectors);
    let mut worst = 0.0f64;
    for (j, l) in values.iter().enumerate() {
        let r: f64 = mv.column(j).iter().zip(vectors.column(j).iter()).map(|(a, v)| (a - l * v).norm_sqr()).sum();
        worst = worst.max(r.sqrt());
    }
    worst
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues ascending.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigenSystem> {
    let herr = m.hermiticity_error();
    if herr > HERMITIAN_TOL {
        return Err(Error::NotHermitian(herr));
    }
    let a = m.as_array();
    // LAPACK sees a row-major array as its transpose; hand it column-major storage
    let mut f = Array2::zeros(a.raw_dim().f());
    f.assign(a);
    let (w, v) = f.eigh(UPLO::Lower).map_err(|e| Error::Linalg(e.to_string()))?;
    let values: Vec<f64> = w.to_vec();
    let complex_values: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
    let residual = residual(a, &complex_values, &v);
    let degenerate = values.windows(2).any(|p| (p[1] - p[0]).abs() < DEGENERACY_TOL);
    Ok(EigenSystem {
        kind: SpectrumKind::Hermitian,
        values,
        vectors: ComplexMatrix { entries: v },
        residual,
        degenerate,
    })
}

/// `exp(-i * scale * h)` for Hermitian `h`, via its eigendecomposition.
pub fn hermitian_expm(h: &ComplexMatrix, scale: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    let v = eig.vectors.as_array();
    let mut scaled = v.clone();
    for (j, mut col) in scaled.columns_mut().into_iter().enumerate() {
        let phase = C64::from_polar(1.0, -scale * eig.values[j]);
        col.mapv_inplace(|z| z * phase);
    }
    let vh = v.t().mapv(|z| z.conj());
    Ok(ComplexMatrix { entries: scaled.dot(&vh) })
}

/// Complex Schur decomposition `A = Z T Z^dagger` through LAPACK `zgees`.
/// Returns the diagonal of `T` and the Schur vectors `Z`.
fn complex_schur(a: &Array2<C64>) -> Result<(Vec<C64>, Array2<C64>)> {
    use lapack_sys::__BindgenComplex as LapackComplex;

    let n = a.nrows();
    let ni = n as i32;
    // column-major copy
    let mut buf: Vec<C64> = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            buf.push(a[[i, j]]);
        }
    }
    let mut w = vec![C64::new(0.0, 0.0); n];
    let mut vs = vec![C64::new(0.0, 0.0); n * n];
    let mut rwork = vec![0.0f64; n.max(1)];
    let mut bwork = vec![0i32; n.max(1)];
    let mut sdim = 0i32;
    let mut info = 0i32;
    let jobvs = b'V' as std::os::raw::c_char;
    let sort = b'N' as std::os::raw::c_char;

    // Complex64 and LapackComplex<f64> are both repr(C) { re, im }.
    let cast = |p: *mut C64| p as *mut LapackComplex<f64>;

    let mut query = C64::new(0.0, 0.0);
    let lwork_query = -1i32;
    unsafe {
        lapack_sys::zgees_(
            &jobvs,
            &sort,
            None,
            &ni,
            cast(buf.as_mut_ptr()),
            &ni,
            &mut sdim,
            cast(w.as_mut_ptr()),
            cast(vs.as_mut_ptr()),
            &ni,
            cast(&mut query),
            &lwork_query,
            rwork.as_mut_ptr(),
            bwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zgees", info });
    }
    let lwork = (query.re as i32).max(2 * ni).max(1);
    let mut work = vec![C64::new(0.0, 0.0); lwork as usize];
    unsafe {
        lapack_sys::zgees_(
            &jobvs,
            &sort,
            None,
            &ni,
            cast(buf.as_mut_ptr()),
            &ni,
            &mut sdim,
            cast(w.as_mut_ptr()),
            cast(vs.as_mut_ptr()),
            &ni,
            cast(work.as_mut_ptr()),
            &lwork,
            rwork.as_mut_ptr(),
            bwork.as_mut_ptr(),
            &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Lapack { routine: "zgees", info });
    }
    let z = Array2::from_shape_fn((n, n), |(i, j)| vs[i + j * n]);
    Ok((w, z))
}

/// Argument of the first component whose modulus exceeds `1e-12`.
fn leading_arg(col: ndarray::ArrayView1<C64>) -> f64 {
    col.iter().find(|z| z.norm() > 1e-12).map(|z| z.arg()).unwrap_or(0.0)
}

/// Eigendecomposition of a unitary matrix. Eigenphases lie in `(-pi, pi]`,
/// ascending, ties broken by the argument of the first nonzero eigenvector
/// component. The eigenvectors are the Schur vectors of `u`, which for a
/// normal matrix form an orthonormal eigenbasis.
pub fn unitary_eig(u: &ComplexMatrix) -> Result<EigenSystem> {
    let uerr = u.unitarity_error();
    if uerr > UNITARY_TOL {
        return Err(Error::NotUnitary(uerr));
    }
    let a = u.as_array();
    let (w, z) = complex_schur(a)?;
    let n = w.len();

    let mut phases: Vec<f64> = w
        .iter()
        .map(|l| {
            let t = l.arg();
            if t <= -PI {
                PI
            } else {
                t
            }
        })
        .collect();
    let args: Vec<f64> = (0..n).map(|j| leading_arg(z.column(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        phases[i]
            .partial_cmp(&phases[j])
            .unwrap_or(Ordering::Equal)
            .then(args[i].partial_cmp(&args[j]).unwrap_or(Ordering::Equal))
    });
    let vectors = Array2::from_shape_fn((n, n), |(i, j)| z[[i, order[j]]]);
    phases = order.iter().map(|&i| phases[i]).collect();

    let values: Vec<C64> = phases.iter().map(|&t| C64::from_polar(1.0, t)).collect();
    let residual = residual(a, &values, &vectors);
    let mut degenerate = phases.windows(2).any(|p| p[1] - p[0] < DEGENERACY_TOL);
    if n > 1 {
        degenerate |= phases[0] + 2.0 * PI - phases[n - 1] < DEGENERACY_TOL;
    }
    Ok(EigenSystem {
        kind: SpectrumKind::Unitary,
        values: phases,
        vectors: ComplexMatrix { entries: vectors },
        residual,
        degenerate,
    })
}
