//! Mutually unbiased bases, random sub-sampled Gram matrices, and the
//! combinatorics of their spectral moments.

pub mod combinat;
pub mod error;
pub mod field;
pub mod linalg;
pub mod mub;
pub mod paths;
pub mod quad;
pub mod rng;
pub mod sampling;
pub mod spectra;

pub use error::{Error, Result};
