//! Translation-symmetry sectors, inverse participation ratios and
//! nearest-neighbour level statistics of the Floquet operator.

mod ipr;
mod sector;
mod stats;

pub use ipr::{ipr, Eigenbasis, IprBasis, IprResult, FULL_BASIS_MAX_QUBITS, SPAN_TOL};
pub use sector::{build_sector, orbits, sector_matrix, SectorBasis, SECTOR_UNITARY_TOL};
pub use stats::{
    brody_alpha, brody_cdf, brody_fit, brody_loglik, brody_pdf, ks_distance, poisson_cdf, sample_brody,
    spacing_histogram, spacing_statistics, statistics_sectors, unfolded_spacings, wigner_cdf, write_histogram,
    SpectralReport, BRODY_MIN_SAMPLES, BRODY_Q_MAX,
};
