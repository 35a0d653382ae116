//! Fixtures shared by the benchmarks.

use kicknm_core::{
    build_coherent_state, build_floquet_pair, ChainParams, CoherentSpec, ComplexVector, Coupling, FloquetPair,
    RngStream,
};

/// Integrable-regime pair with a global Ising perturbation.
pub fn integrable_pair(n_qubits: usize) -> FloquetPair {
    let params = ChainParams::new(n_qubits, 0.1, 1.4, 0.1, Coupling::VJ);
    build_floquet_pair(&params, &mut RngStream::new(0, 0)).expect("valid parameters")
}

pub fn coherent(n_qubits: usize) -> ComplexVector {
    build_coherent_state(CoherentSpec::new(2.8, 4.8).expect("valid angles"), n_qubits).expect("valid chain")
}
