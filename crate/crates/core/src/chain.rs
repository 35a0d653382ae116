//! The kicked Ising chain with periodic boundaries and its perturbed
//! one-period propagators `U+` and `U-`.
//!
//! Basis index `b` encodes qubit `i` as bit `i` (qubit 0 is the least
//! significant bit) and `s_i = 1 - 2 bit_i`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numerics::{hermitian_expm, sample_gue, ComplexMatrix, ComplexVector, RngStream};

/// Largest Hilbert-space dimension handled by dense paths.
pub const DENSE_DIM_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coupling {
    /// Global Ising perturbation, every bond `1 +- eps`.
    VJ,
    /// Local Ising perturbation on bond (0, 1).
    V01,
    /// Global transverse-field perturbation, every qubit `b_perp +- eps`.
    VB,
    /// Local transverse-field perturbation on qubit 0.
    V0,
    /// Static GUE term added between kicks.
    VGUE,
}

impl Coupling {
    pub const ALL: [Coupling; 5] = [Coupling::VJ, Coupling::V01, Coupling::VB, Coupling::V0, Coupling::VGUE];

    /// Whether the perturbed propagators keep the cyclic translation symmetry.
    pub fn is_translation_invariant(self) -> bool {
        matches!(self, Coupling::VJ | Coupling::VB)
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Coupling::VJ => "VJ",
            Coupling::V01 => "V01",
            Coupling::VB => "VB",
            Coupling::V0 => "V0",
            Coupling::VGUE => "VGUE",
        };
        f.write_str(s)
    }
}

impl FromStr for Coupling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "VJ" => Ok(Coupling::VJ),
            "V01" => Ok(Coupling::V01),
            "VB" => Ok(Coupling::VB),
            "V0" => Ok(Coupling::V0),
            "VGUE" => Ok(Coupling::VGUE),
            other => Err(Error::InvalidParameter(format!("unknown coupling {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainParams {
    pub n_qubits: usize,
    pub b_perp: f64,
    pub b_par: f64,
    pub epsilon: f64,
    pub coupling: Coupling,
    pub gue_seed: Option<u64>,
}

impl ChainParams {
    pub fn new(n_qubits: usize, b_perp: f64, b_par: f64, epsilon: f64, coupling: Coupling) -> Self {
        let gue_seed = (coupling == Coupling::VGUE).then_some(0);
        Self { n_qubits, b_perp, b_par, epsilon, coupling, gue_seed }
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits < 2 || self.n_qubits > 24 {
            return Err(Error::InvalidParameter(format!("n_qubits must lie in [2, 24], got {}", self.n_qubits)));
        }
        if self.epsilon < 0.0 || !self.epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!("epsilon must be finite and >= 0, got {}", self.epsilon)));
        }
        if !self.b_perp.is_finite() || !self.b_par.is_finite() {
            return Err(Error::InvalidParameter("kick fields must be finite".into()));
        }
        if self.coupling == Coupling::VGUE && self.gue_seed.is_none() {
            return Err(Error::InvalidParameter("VGUE coupling requires gue_seed".into()));
        }
        Ok(())
    }
}

/// One period of the kicked chain: a diagonal Ising phase (or a dense
/// between-kick factor) followed by independent single-qubit kicks.
#[derive(Clone, Debug, PartialEq)]
pub struct FloquetOperator {
    n_qubits: usize,
    kick_fields: Vec<(f64, f64)>,
    bond_strengths: Vec<f64>,
    dense_factor: Option<ComplexMatrix>,
    ising_phases: Vec<C64>,
    kicks: Vec<Option<[C64; 4]>>,
}

/// `exp(-i (bx sx + bz sz))` as a row-major 2x2, or `None` for the identity.
fn kick_matrix(bx: f64, bz: f64) -> Option<[C64; 4]> {
    let beta = bx.hypot(bz);
    if beta == 0.0 {
        return None;
    }
    let (s, c) = beta.sin_cos();
    let (nx, nz) = (bx / beta, bz / beta);
    Some([C64::new(c, -s * nz), C64::new(0.0, -s * nx), C64::new(0.0, -s * nx), C64::new(c, s * nz)])
}

/// `sum_i J_i s_i s_{i+1}` on basis index `b`, bond `i` joining qubits `i` and `i+1 mod N`.
pub fn ising_energy(b: usize, bonds: &[f64]) -> f64 {
    let n = bonds.len();
    bonds
        .iter()
        .enumerate()
        .map(|(i, j)| {
            let si = 1 - 2 * ((b >> i) & 1) as i32;
            let sj = 1 - 2 * ((b >> ((i + 1) % n)) & 1) as i32;
            j * (si * sj) as f64
        })
        .sum()
}

impl FloquetOperator {
    /// Structured operator from per-qubit `(bx, bz)` kick fields and per-bond strengths.
    pub fn new(kick_fields: Vec<(f64, f64)>, bond_strengths: Vec<f64>) -> Result<Self> {
        let n = kick_fields.len();
        if n < 2 || bond_strengths.len() != n {
            return Err(Error::InvalidParameter(format!(
                "need N >= 2 kick fields and N bonds, got {} and {}",
                n,
                bond_strengths.len()
            )));
        }
        let ising_phases = (0..1usize << n).map(|b| C64::from_polar(1.0, -ising_energy(b, &bond_strengths))).collect();
        let kicks = kick_fields.iter().map(|&(bx, bz)| kick_matrix(bx, bz)).collect();
        Ok(Self { n_qubits: n, kick_fields, bond_strengths, dense_factor: None, ising_phases, kicks })
    }

    /// Operator whose between-kick factor is an arbitrary dense unitary.
    pub fn with_dense_factor(kick_fields: Vec<(f64, f64)>, dense: ComplexMatrix) -> Result<Self> {
        let n = kick_fields.len();
        if dense.dim() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, got: dense.dim() });
        }
        let uerr = dense.unitarity_error();
        if uerr > 1e-9 {
            return Err(Error::NotUnitary(uerr));
        }
        let mut op = Self::new(kick_fields, vec![0.0; n])?;
        op.ising_phases.clear();
        op.dense_factor = Some(dense);
        Ok(op)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn kick_fields(&self) -> &[(f64, f64)] {
        &self.kick_fields
    }

    pub fn bond_strengths(&self) -> &[f64] {
        &self.bond_strengths
    }

    pub fn dense_factor(&self) -> Option<&ComplexMatrix> {
        self.dense_factor.as_ref()
    }

    /// `U |state>` into a new vector.
    pub fn apply(&self, state: &ComplexVector) -> Result<ComplexVector> {
        let mut out = state.clone();
        self.apply_in_place(out.as_mut_slice())?;
        Ok(out)
    }

    /// `amps <- U amps`.
    pub fn apply_in_place(&self, amps: &mut [C64]) -> Result<()> {
        if amps.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: amps.len() });
        }
        match &self.dense_factor {
            Some(dense) => {
                let d = dense.as_array();
                let src = amps.to_vec();
                for (a, row) in amps.iter_mut().zip(d.rows()) {
                    *a = row.iter().zip(&src).map(|(x, y)| x * y).sum();
                }
            }
            None => {
                for (a, p) in amps.iter_mut().zip(&self.ising_phases) {
                    *a *= p;
                }
            }
        }
        for (q, kick) in self.kicks.iter().enumerate() {
            if let Some(k) = kick {
                apply_single_qubit(amps, q, k);
            }
        }
        Ok(())
    }

    /// Dense matrix of the operator, column `j` being `U e_j`.
    pub fn assemble_dense(&self) -> Result<ComplexMatrix> {
        let dim = self.dim();
        if dim > DENSE_DIM_CAP {
            return Err(Error::DimensionCap { dim, cap: DENSE_DIM_CAP });
        }
        let mut m = ComplexMatrix::zeros(dim);
        let mut col = vec![C64::new(0.0, 0.0); dim];
        for j in 0..dim {
            col.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
            col[j] = C64::new(1.0, 0.0);
            self.apply_in_place(&mut col)?;
            m.as_array_mut().column_mut(j).iter_mut().zip(&col).for_each(|(e, v)| *e = *v);
        }
        Ok(m)
    }
}

fn apply_single_qubit(amps: &mut [C64], qubit: usize, k: &[C64; 4]) {
    let stride = 1usize << qubit;
    let dim = amps.len();
    let mut base = 0;
    while base < dim {
        for i0 in base..base + stride {
            let i1 = i0 + stride;
            let (a0, a1) = (amps[i0], amps[i1]);
            amps[i0] = k[0] * a0 + k[1] * a1;
            amps[i1] = k[2] * a0 + k[3] * a1;
        }
        base += 2 * stride;
    }
}

/// Cyclic translation of basis index `b` on `n` qubits: qubit `j` takes the
/// value previously held by qubit `j - 1`.
pub fn shift_index(b: usize, n: usize) -> usize {
    let mask = (1usize << n) - 1;
    ((b << 1) | (b >> (n - 1))) & mask
}

/// `T |state>` for the cyclic translation `T`.
pub fn translate(state: &ComplexVector, n_qubits: usize) -> ComplexVector {
    let mut out = ComplexVector::zeros(state.dim());
    for (b, a) in state.as_slice().iter().enumerate() {
        out.as_mut_slice()[shift_index(b, n_qubits)] = *a;
    }
    out
}

/// The pair of one-period propagators `U+` and `U-` for `H_env +- eps V`.
#[derive(Clone, Debug)]
pub struct FloquetPair {
    pub plus: FloquetOperator,
    pub minus: FloquetOperator,
    pub params: ChainParams,
}

impl FloquetPair {
    /// True when both propagators are element-wise identical (e.g. `eps = 0`).
    pub fn is_trivial(&self) -> bool {
        self.plus == self.minus
    }
}

/// Builds `U+-` for the configured coupling. `rng` is drawn from only for `VGUE`.
pub fn build_floquet_pair(params: &ChainParams, rng: &mut RngStream) -> Result<FloquetPair> {
    params.validate()?;
    let n = params.n_qubits;
    let eps = params.epsilon;
    let uniform_kick = vec![(params.b_perp, params.b_par); n];
    let unit_bonds = vec![1.0; n];

    let (plus, minus) = match params.coupling {
        Coupling::VJ => (
            FloquetOperator::new(uniform_kick.clone(), vec![1.0 + eps; n])?,
            FloquetOperator::new(uniform_kick, vec![1.0 - eps; n])?,
        ),
        Coupling::V01 => {
            let mut bp = unit_bonds.clone();
            let mut bm = unit_bonds;
            bp[0] += eps;
            bm[0] -= eps;
            (FloquetOperator::new(uniform_kick.clone(), bp)?, FloquetOperator::new(uniform_kick, bm)?)
        }
        Coupling::VB => (
            FloquetOperator::new(vec![(params.b_perp + eps, params.b_par); n], unit_bonds.clone())?,
            FloquetOperator::new(vec![(params.b_perp - eps, params.b_par); n], unit_bonds)?,
        ),
        Coupling::V0 => {
            let mut kp = uniform_kick.clone();
            let mut km = uniform_kick;
            kp[0].0 += eps;
            km[0].0 -= eps;
            (FloquetOperator::new(kp, unit_bonds.clone())?, FloquetOperator::new(km, unit_bonds)?)
        }
        Coupling::VGUE => {
            let dim = params.dim();
            if dim > DENSE_DIM_CAP {
                return Err(Error::DimensionCap { dim, cap: DENSE_DIM_CAP });
            }
            let v = sample_gue(dim, rng)?;
            let ising: Vec<C64> = (0..dim).map(|b| C64::new(ising_energy(b, &unit_bonds), 0.0)).collect();
            let h_ising = ComplexMatrix::from_diagonal(&ising);
            let up = hermitian_expm(&h_ising.add(&v.scaled(C64::new(eps, 0.0))), 1.0)?;
            let um = hermitian_expm(&h_ising.add(&v.scaled(C64::new(-eps, 0.0))), 1.0)?;
            (
                FloquetOperator::with_dense_factor(uniform_kick.clone(), up)?,
                FloquetOperator::with_dense_factor(uniform_kick, um)?,
            )
        }
    };
    Ok(FloquetPair { plus, minus, params: params.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_state(dim: usize, rng: &mut RngStream) -> ComplexVector {
        let mut v = ComplexVector::new((0..dim).map(|_| rng.complex_normal()).collect());
        v.normalize();
        v
    }

    /// Explicit Kronecker-product assembly of kick * Ising, independent of the
    /// bitwise gate path.
    fn dense_oracle(op: &FloquetOperator) -> ComplexMatrix {
        let n = op.n_qubits();
        let dim = 1 << n;
        let mut kick = ComplexMatrix::identity(1);
        // qubit n-1 is the most significant bit, so it is the leftmost factor
        for q in (0..n).rev() {
            let (bx, bz) = op.kick_fields()[q];
            let k = kick_matrix(bx, bz).unwrap_or([
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
            ]);
            let kd = kick.dim();
            kick = ComplexMatrix::from_fn(kd * 2, |(i, j)| kick.as_array()[[i / 2, j / 2]] * k[(i % 2) * 2 + j % 2]);
        }
        let between = match op.dense_factor() {
            Some(d) => d.clone(),
            None => {
                let diag: Vec<C64> =
                    (0..dim).map(|b| C64::from_polar(1.0, -ising_energy(b, op.bond_strengths()))).collect();
                ComplexMatrix::from_diagonal(&diag)
            }
        };
        kick.matmul(&between).unwrap()
    }

    fn pair(n: usize, coupling: Coupling, eps: f64) -> FloquetPair {
        let params = ChainParams { gue_seed: Some(7), ..ChainParams::new(n, 0.7, 1.4, eps, coupling) };
        build_floquet_pair(&params, &mut RngStream::new(7, 0)).unwrap()
    }

    #[test]
    fn zero_coupling_gives_identical_propagators() {
        for c in Coupling::ALL {
            let p = pair(3, c, 0.0);
            assert!(p.is_trivial(), "{c}");
        }
    }

    #[test]
    fn vj_bonds_shifted() {
        let p = pair(4, Coupling::VJ, 0.1);
        assert!(p.plus.bond_strengths().iter().all(|&j| (j - 1.1).abs() < 1e-15));
        assert!(p.minus.bond_strengths().iter().all(|&j| (j - 0.9).abs() < 1e-15));
    }

    #[test]
    fn local_couplings_touch_one_site() {
        let p = pair(4, Coupling::V01, 0.1);
        assert_eq!(p.plus.bond_strengths(), &[1.1, 1.0, 1.0, 1.0]);
        let p = pair(4, Coupling::V0, 0.1);
        assert!((p.plus.kick_fields()[0].0 - 0.8).abs() < 1e-15);
        assert!((p.minus.kick_fields()[0].0 - 0.6).abs() < 1e-15);
        assert_eq!(p.plus.kick_fields()[1], (0.7, 1.4));
    }

    #[test]
    fn identity_parameters() {
        let op = FloquetOperator::new(vec![(0.0, 0.0); 3], vec![0.0; 3]).unwrap();
        let mut rng = RngStream::new(1, 1);
        let v = random_state(8, &mut rng);
        assert_eq!(op.apply(&v).unwrap(), v);
        assert!(op.assemble_dense().unwrap().max_abs_diff(&ComplexMatrix::identity(8)) < 1e-15);
    }

    #[test]
    fn fast_path_matches_kronecker_oracle() {
        let mut rng = RngStream::new(3, 0);
        for n in 2..=5 {
            for c in Coupling::ALL {
                let p = pair(n, c, 0.1);
                for op in [&p.plus, &p.minus] {
                    let oracle = dense_oracle(op);
                    for _ in 0..5 {
                        let v = random_state(1 << n, &mut rng);
                        let fast = op.apply(&v).unwrap();
                        let slow = oracle.matvec(&v).unwrap();
                        assert!(fast.max_abs_diff(&slow) <= 1e-10, "n={n} {c}");
                    }
                }
            }
        }
    }

    #[test]
    fn norm_preserved() {
        let p = pair(5, Coupling::VJ, 0.1);
        let mut rng = RngStream::new(9, 0);
        for _ in 0..1000 {
            let v = random_state(32, &mut rng);
            let w = p.plus.apply(&v).unwrap();
            assert!((w.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn assembled_columns_and_unitarity() {
        let p = pair(4, Coupling::V0, 0.1);
        let u = p.plus.assemble_dense().unwrap();
        assert!(u.unitarity_error() < 1e-9);
        let col = p.plus.apply(&ComplexVector::basis(16, 5)).unwrap();
        assert!(u.column(5).max_abs_diff(&col) < 1e-15);
    }

    #[test]
    fn gue_dense_factor_matches_explicit_assembly() {
        let params = ChainParams { gue_seed: Some(21), ..ChainParams::new(3, 0.1, 1.4, 0.1, Coupling::VGUE) };
        let p = build_floquet_pair(&params, &mut RngStream::new(21, 0)).unwrap();
        let v = sample_gue(8, &mut RngStream::new(21, 0)).unwrap();
        let mut h = v.scaled(C64::new(0.1, 0.0));
        for b in 0..8 {
            h.as_array_mut()[[b, b]] += C64::new(ising_energy(b, &[1.0; 3]), 0.0);
        }
        let expected = hermitian_expm(&h, 1.0).unwrap();
        let got = p.plus.dense_factor().unwrap();
        assert!(got.unitarity_error() < 1e-9);
        assert!(got.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn gue_refused_beyond_cap() {
        let params = ChainParams { gue_seed: Some(1), ..ChainParams::new(13, 0.1, 1.4, 0.1, Coupling::VGUE) };
        assert!(matches!(build_floquet_pair(&params, &mut RngStream::new(1, 0)), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn two_site_chain_doubles_the_bond() {
        // bonds (0,1) and (1,0) coincide: E(00) = 2, E(01) = -2
        assert_eq!(ising_energy(0b00, &[1.0, 1.0]), 2.0);
        assert_eq!(ising_energy(0b01, &[1.0, 1.0]), -2.0);
    }

    #[test]
    fn translation_commutation() {
        let mut rng = RngStream::new(4, 0);
        let n = 5;
        for c in Coupling::ALL.into_iter().filter(|c| *c != Coupling::VGUE) {
            let p = pair(n, c, 0.1);
            let v = random_state(1 << n, &mut rng);
            let ut = p.plus.apply(&translate(&v, n)).unwrap();
            let tu = translate(&p.plus.apply(&v).unwrap(), n);
            let diff = ut.max_abs_diff(&tu);
            if c.is_translation_invariant() {
                assert!(diff <= 1e-10, "{c}: {diff}");
            } else {
                assert!(diff > 1e-4, "{c}: {diff}");
            }
        }
    }

    #[test]
    fn repeated_application_matches_matrix_power() {
        let p = pair(4, Coupling::VB, 0.1);
        let u = p.plus.assemble_dense().unwrap();
        let mut rng = RngStream::new(8, 0);
        let v0 = random_state(16, &mut rng);
        let mut fast = v0.clone();
        let mut power = ComplexMatrix::identity(16);
        for t in 1..=50 {
            p.plus.apply_in_place(fast.as_mut_slice()).unwrap();
            power = u.matmul(&power).unwrap();
            if t % 10 == 0 {
                assert!(power.matvec(&v0).unwrap().max_abs_diff(&fast) < 1e-8);
            }
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let p = pair(3, Coupling::VJ, 0.1);
        assert!(p.plus.apply(&ComplexVector::zeros(4)).is_err());
    }

    #[test]
    fn coupling_parse_round_trip() {
        for c in Coupling::ALL {
            assert_eq!(c.to_string().parse::<Coupling>().unwrap(), c);
        }
        assert!("VX".parse::<Coupling>().is_err());
    }
}
