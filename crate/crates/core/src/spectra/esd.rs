//! Empirical spectral distributions and the Kolmogorov-Smirnov distance to MP.

use crate::spectra::eigen::Spectrum;
use crate::spectra::mp::{mp_cdf, MpParams};

/// Points of the fixed evaluation grid on `[a - 0.5, b + 0.5]`.
pub const KS_GRID_POINTS: usize = 2000;

/// Step CDF placing equal mass on each stored value.
///
/// Averaging the ESDs of several equally sized spectra gives the ESD of their
/// pooled values, so one type covers both.
#[derive(Clone, Debug, PartialEq)]
pub struct Esd {
    sorted: Vec<f64>,
}

impl Esd {
    pub fn new(spectrum: &Spectrum) -> Self {
        Esd { sorted: spectrum.values().to_vec() }
    }

    /// Average of the ESDs of equally sized spectra.
    pub fn averaged(spectra: &[Spectrum]) -> Self {
        if let Some(first) = spectra.first() {
            assert!(spectra.iter().all(|s| s.len() == first.len()), "averaging spectra of different sizes");
        }
        let mut sorted: Vec<f64> = spectra.iter().flat_map(|s| s.values().iter().copied()).collect();
        sorted.sort_by(f64::total_cmp);
        Esd { sorted }
    }

    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Esd { sorted: values }
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }

    /// `F(x) = #{lambda <= x} / len`.
    pub fn cdf(&self, x: f64) -> f64 {
        if self.sorted.is_empty() {
            return 0.0;
        }
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    /// Left limit `F(x-) = #{lambda < x} / len`.
    pub fn cdf_left(&self, x: f64) -> f64 {
        if self.sorted.is_empty() {
            return 0.0;
        }
        self.sorted.partition_point(|&v| v < x) as f64 / self.sorted.len() as f64
    }
}

/// `sup |F - F_MP|` over both sides of every jump of `F` and a fixed grid.
pub fn ks_distance(esd: &Esd, params: &MpParams) -> f64 {
    let mut worst = 0.0f64;
    let mut jumps = esd.values().to_vec();
    jumps.dedup();
    for &x in &jumps {
        let reference = mp_cdf(params, x);
        worst = worst.max((esd.cdf(x) - reference).abs()).max((esd.cdf_left(x) - reference).abs());
    }
    let lo = params.a() - 0.5;
    let hi = params.b() + 0.5;
    for i in 0..KS_GRID_POINTS {
        let x = lo + (hi - lo) * i as f64 / (KS_GRID_POINTS - 1) as f64;
        worst = worst.max((esd.cdf(x) - mp_cdf(params, x)).abs());
    }
    worst
}
