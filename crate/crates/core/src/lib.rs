//! Qubit dephasing under a kicked Ising spin-chain environment.
//!
//! The crate evolves the fidelity amplitude of spin-coherent environment
//! states, turns it into non-Markovianity measures, and characterises the
//! environment through inverse participation ratios and level statistics in
//! translation-symmetry sectors.

pub mod chain;
pub mod coherent;
pub mod dynamics;
pub mod error;
pub mod measures;
pub mod numerics;
pub mod spectral;
pub mod sweep;

pub use chain::{build_floquet_pair, ChainParams, Coupling, FloquetOperator, FloquetPair};
pub use coherent::{build_coherent_state, coherent_overlap, CoherentSpec, Hemisphere, SphereGrid};
pub use dynamics::{asymptotic_fidelity, fidelity_series, AsymptoticFidelity, ChannelSnapshot, FidelitySeries};
pub use error::{Error, Result};
pub use measures::{compute_report, IndicatorKind, IndicatorSeries, NmReport};
pub use numerics::{ComplexMatrix, ComplexVector, EigenSystem, RngStream};
pub use spectral::{IprBasis, IprResult, SectorBasis, SpectralReport};
pub use sweep::{run_saturation, run_spectral, run_sweep, RunConfig, SaturationRow, SweepRow};
