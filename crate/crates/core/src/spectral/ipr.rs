use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use super::sector::{build_sector, sector_matrix, SectorBasis};
use crate::chain::{Coupling, FloquetOperator};
use crate::error::{Error, Result};
use crate::numerics::{unitary_eig, ComplexVector, EigenSystem};

/// States whose weight outside the eigenbasis span exceeds this are rejected.
pub const SPAN_TOL: f64 = 1e-8;
/// Largest chain diagonalized in the full Hilbert space.
pub const FULL_BASIS_MAX_QUBITS: usize = 12;

/// Requested eigenbasis for inverse participation ratios.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IprBasis {
    /// `SectorK0` for translation-invariant couplings, `Full` otherwise.
    Auto,
    SectorK0,
    Full,
}

impl IprBasis {
    pub fn resolve(self, coupling: Coupling) -> IprBasis {
        match self {
            IprBasis::Auto if coupling.is_translation_invariant() => IprBasis::SectorK0,
            IprBasis::Auto => IprBasis::Full,
            other => other,
        }
    }
}

impl fmt::Display for IprBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IprBasis::Auto => "AUTO",
            IprBasis::SectorK0 => "SECTOR_K0",
            IprBasis::Full => "FULL",
        })
    }
}

impl FromStr for IprBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "AUTO" => Ok(IprBasis::Auto),
            "SECTOR_K0" => Ok(IprBasis::SectorK0),
            "FULL" => Ok(IprBasis::Full),
            other => Err(Error::InvalidParameter(format!("unknown ipr basis {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IprResult {
    pub value: f64,
    /// `SectorK0` or `Full`, never `Auto`.
    pub basis_kind: IprBasis,
    /// The eigenbasis came from a degenerate spectrum; the value is basis-dependent.
    pub degenerate_flag: bool,
}

/// `sum_i |<v_i|psi>|^4` for `psi` given in the coordinates of the
/// eigenvectors' space. Rejects states with weight outside the span.
pub fn ipr(state: &ComplexVector, eig: &EigenSystem) -> Result<IprResult> {
    ipr_with_norm(state, eig, state.norm_sqr(), IprBasis::Full)
}

fn ipr_with_norm(coords: &ComplexVector, eig: &EigenSystem, total: f64, kind: IprBasis) -> Result<IprResult> {
    if coords.dim() != eig.dim() {
        return Err(Error::DimensionMismatch { expected: eig.dim(), got: coords.dim() });
    }
    let v = eig.vectors.as_array();
    let mut weight = 0.0;
    let mut value = 0.0;
    for col in v.columns() {
        let overlap: C64 = col.iter().zip(coords.as_slice()).map(|(a, b)| a.conj() * b).sum();
        let p = overlap.norm_sqr();
        weight += p;
        value += p * p;
    }
    let deficit = total - weight;
    if deficit > SPAN_TOL {
        return Err(Error::OutsideSpan(deficit));
    }
    Ok(IprResult { value, basis_kind: kind, degenerate_flag: eig.degenerate })
}

/// Eigenbasis of a Floquet operator, either restricted to the zero-momentum
/// sector or over the full Hilbert space.
#[derive(Clone, Debug)]
pub struct Eigenbasis {
    pub kind: IprBasis,
    pub sector: Option<SectorBasis>,
    pub eig: EigenSystem,
}

impl Eigenbasis {
    pub fn build(op: &FloquetOperator, kind: IprBasis) -> Result<Self> {
        match kind {
            IprBasis::SectorK0 => Self::sector_k0(op),
            IprBasis::Full => Self::full(op),
            IprBasis::Auto => Err(Error::InvalidParameter("resolve AUTO before building an eigenbasis".into())),
        }
    }

    pub fn sector_k0(op: &FloquetOperator) -> Result<Self> {
        let sector = build_sector(op.n_qubits(), 0)?;
        let block = sector_matrix(op, &sector)?;
        let eig = unitary_eig(&block)?;
        if eig.degenerate {
            log::warn!("zero-momentum spectrum is degenerate; IPR values depend on the eigenbasis choice");
        }
        Ok(Self { kind: IprBasis::SectorK0, sector: Some(sector), eig })
    }

    pub fn full(op: &FloquetOperator) -> Result<Self> {
        if op.n_qubits() > FULL_BASIS_MAX_QUBITS {
            return Err(Error::DimensionCap { dim: op.dim(), cap: 1 << FULL_BASIS_MAX_QUBITS });
        }
        let eig = unitary_eig(&op.assemble_dense()?)?;
        if eig.degenerate {
            log::warn!("Floquet spectrum is degenerate; IPR values depend on the eigenbasis choice");
        }
        Ok(Self { kind: IprBasis::Full, sector: None, eig })
    }

    /// IPR of a full-space state.
    pub fn ipr(&self, state: &ComplexVector) -> Result<IprResult> {
        match &self.sector {
            Some(sector) => {
                let coords = sector.project(state)?;
                ipr_with_norm(&coords, &self.eig, state.norm_sqr(), self.kind)
            }
            None => ipr_with_norm(state, &self.eig, state.norm_sqr(), self.kind),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{build_floquet_pair, ChainParams};
    use crate::coherent::{build_coherent_state, CoherentSpec};
    use crate::numerics::{ComplexMatrix, RngStream};

    fn eig_of_random_unitary(dim: usize) -> EigenSystem {
        let h = crate::numerics::sample_gue_unscaled(dim, &mut RngStream::new(4, 0)).unwrap();
        unitary_eig(&crate::numerics::hermitian_expm(&h, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn eigenvector_has_unit_ipr() {
        let eig = eig_of_random_unitary(6);
        let r = ipr(&eig.vector(2), &eig).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_superposition_has_inverse_count() {
        let eig = eig_of_random_unitary(8);
        for d in 1..=8 {
            let mut psi = ComplexVector::zeros(8);
            for i in 0..d {
                let v = eig.vector(i);
                for (a, b) in psi.as_mut_slice().iter_mut().zip(v.as_slice()) {
                    *a += b / (d as f64).sqrt();
                }
            }
            let r = ipr(&psi, &eig).unwrap();
            assert!((r.value - 1.0 / d as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn outside_span_rejected() {
        let mut eig = eig_of_random_unitary(4);
        let v = eig.vectors.as_array().clone();
        // keep two eigenvectors, zero the rest
        eig.vectors = ComplexMatrix::from_fn(4, |(i, j)| if j < 2 { v[[i, j]] } else { C64::new(0.0, 0.0) });
        let psi = ComplexVector::new(v.column(3).to_vec());
        assert!(matches!(ipr(&psi, &eig), Err(Error::OutsideSpan(_))));
        assert!(matches!(ipr(&ComplexVector::zeros(3), &eig), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn sector_and_full_bases_agree_on_symmetric_states() {
        for n in [4usize, 6, 8] {
            let params = ChainParams::new(n, 0.9, 1.4, 0.1, Coupling::VJ);
            let pair = build_floquet_pair(&params, &mut RngStream::new(0, 0)).unwrap();
            let sector = Eigenbasis::sector_k0(&pair.plus).unwrap();
            let full = Eigenbasis::full(&pair.plus).unwrap();
            // the full spectrum pairs up k and N-k sectors; only k = 0 must be simple
            assert!(!sector.eig.degenerate);
            for (theta, phi) in [(0.3, 0.2), (1.5, 3.5), (2.8, 4.8)] {
                let psi = build_coherent_state(CoherentSpec::new(theta, phi).unwrap(), n).unwrap();
                let a = sector.ipr(&psi).unwrap();
                let b = full.ipr(&psi).unwrap();
                assert_eq!(a.basis_kind, IprBasis::SectorK0);
                assert!((a.value - b.value).abs() < 1e-8, "N={n}: {} vs {}", a.value, b.value);
                assert!(a.value >= 1.0 / sector.eig.dim() as f64 - 1e-12 && a.value <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn coherent_states_live_in_zero_momentum() {
        let basis = build_sector(7, 0).unwrap();
        for (theta, phi) in [(0.0, 0.0), (1.1, 2.0), (3.0, 5.5)] {
            let psi = build_coherent_state(CoherentSpec::new(theta, phi).unwrap(), 7).unwrap();
            let weight = basis.project(&psi).unwrap().norm_sqr();
            assert!((weight - 1.0).abs() < 1e-10);
            let back = basis.embed(&basis.project(&psi).unwrap()).unwrap();
            assert!(back.max_abs_diff(&psi) < 1e-10);
        }
    }

    #[test]
    fn auto_resolution() {
        assert_eq!(IprBasis::Auto.resolve(Coupling::VJ), IprBasis::SectorK0);
        assert_eq!(IprBasis::Auto.resolve(Coupling::VB), IprBasis::SectorK0);
        assert_eq!(IprBasis::Auto.resolve(Coupling::V01), IprBasis::Full);
        assert_eq!(IprBasis::Auto.resolve(Coupling::VGUE), IprBasis::Full);
        assert_eq!(IprBasis::Full.resolve(Coupling::VJ), IprBasis::Full);
        assert_eq!("sector_k0".parse::<IprBasis>().unwrap(), IprBasis::SectorK0);
    }
}
