//! Eigenvalues, empirical spectral distributions and the Marchenko-Pastur law.

pub mod eigen;
pub mod esd;
pub mod mp;

pub use eigen::{eigenvalues_hermitian, hermitian_spectrum, Spectrum};
pub use esd::{ks_distance, Esd};
pub use mp::{mp_cdf, mp_moment, mp_pdf, mp_quantile, MpParams};
