//! Spin coherent states `(cos(theta/2)|0> + sin(theta/2) e^{i phi}|1>)^{(x)N}`
//! and grids over the Poincare sphere.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numerics::ComplexVector;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentSpec {
    pub theta: f64,
    pub phi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hemisphere {
    /// `theta <= pi/2`
    North,
    South,
}

impl Hemisphere {
    pub fn tag(self) -> &'static str {
        match self {
            Hemisphere::North => "N",
            Hemisphere::South => "S",
        }
    }
}

impl CoherentSpec {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI + 1e-12).contains(&theta) {
            return Err(Error::InvalidParameter(format!("theta must lie in [0, pi], got {theta}")));
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::InvalidParameter(format!("phi must lie in [0, 2pi), got {phi}")));
        }
        Ok(Self { theta: theta.min(PI), phi })
    }

    pub fn hemisphere(&self) -> Hemisphere {
        if self.theta <= PI / 2.0 {
            Hemisphere::North
        } else {
            Hemisphere::South
        }
    }
}

/// Amplitude on basis index `b` depends only on its Hamming weight `w`:
/// `cos(theta/2)^{N-w} (sin(theta/2) e^{i phi})^w`.
pub fn build_coherent_state(spec: CoherentSpec, n_qubits: usize) -> Result<ComplexVector> {
    if n_qubits == 0 {
        return Err(Error::InvalidParameter("n_qubits must be >= 1".into()));
    }
    let c = C64::new((spec.theta / 2.0).cos(), 0.0);
    let s = C64::from_polar((spec.theta / 2.0).sin(), spec.phi);
    let by_weight: Vec<C64> = (0..=n_qubits).map(|w| c.powu((n_qubits - w) as u32) * s.powu(w as u32)).collect();
    let amps = (0..1usize << n_qubits).map(|b| by_weight[b.count_ones() as usize]).collect();
    Ok(ComplexVector::new(amps))
}

/// Closed-form overlap `<a|b>` of two coherent states on `n_qubits` qubits.
pub fn coherent_overlap(a: CoherentSpec, b: CoherentSpec, n_qubits: usize) -> C64 {
    let single = C64::new((a.theta / 2.0).cos() * (b.theta / 2.0).cos(), 0.0)
        + C64::from_polar((a.theta / 2.0).sin() * (b.theta / 2.0).sin(), b.phi - a.phi);
    single.powu(n_qubits as u32)
}

/// Rectangular `(theta, phi)` mesh enumerated theta-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereGrid {
    pub theta_min: f64,
    pub theta_max: f64,
    pub theta_step: f64,
    pub phi_min: f64,
    pub phi_max: f64,
    pub phi_step: f64,
}

impl Default for SphereGrid {
    fn default() -> Self {
        Self { theta_min: 0.0, theta_max: PI, theta_step: 0.1, phi_min: 0.0, phi_max: TAU, phi_step: 0.1 }
    }
}

/// `min, min + step, ...` up to `max` (inclusive to a 1e-9 step tolerance).
/// Values reaching `2 pi` are dropped when `periodic` since they repeat `0`.
fn axis(min: f64, max: f64, step: f64, periodic: bool) -> Vec<f64> {
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| min + i as f64 * step).filter(|&x| !periodic || x < TAU - 1e-9 * step).collect()
}

impl SphereGrid {
    pub fn single(theta: f64, phi: f64) -> Self {
        Self { theta_min: theta, theta_max: theta, theta_step: 1.0, phi_min: phi, phi_max: phi, phi_step: 1.0 }
    }

    pub fn thetas(&self) -> Vec<f64> {
        axis(self.theta_min, self.theta_max, self.theta_step, false)
    }

    pub fn phis(&self) -> Vec<f64> {
        axis(self.phi_min, self.phi_max, self.phi_step, true)
    }

    pub fn enumerate(&self) -> Result<Vec<CoherentSpec>> {
        enumerate_grid(self)
    }
}

pub fn enumerate_grid(g: &SphereGrid) -> Result<Vec<CoherentSpec>> {
    let vals = [g.theta_min, g.theta_max, g.theta_step, g.phi_min, g.phi_max, g.phi_step];
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("grid bounds must be finite".into()));
    }
    if g.theta_step <= 0.0 || g.phi_step <= 0.0 {
        return Err(Error::InvalidParameter("grid steps must be positive".into()));
    }
    if g.theta_max < g.theta_min || g.phi_max < g.phi_min {
        return Err(Error::InvalidParameter("empty grid range".into()));
    }
    let phis = g.phis();
    let mut points = Vec::new();
    for theta in g.thetas() {
        for &phi in &phis {
            points.push(CoherentSpec::new(theta, phi)?);
        }
    }
    if points.is_empty() {
        return Err(Error::InvalidParameter("empty grid range".into()));
    }
    Ok(points)
}
