//! Tabulated MP law and a quadrature cross-check of its moments.

use mub_core::quad::adaptive_simpson;
use mub_core::spectra::{mp_cdf, mp_moment, mp_pdf, MpParams};
use std::f64::consts::FRAC_PI_2;

use crate::error::Result;
use crate::report::Check;

const QUAD_TOL: f64 = 1e-13;

/// `int x^l f_MP(x) dx` in `theta`, where `x = a + (b - a) sin^2 theta`.
pub fn quadrature_moment(mp: &MpParams, l: u32) -> f64 {
    let w = mp.b() - mp.a();
    let f = |t: f64| {
        let (s, c) = t.sin_cos();
        let x = mp.a() + w * s * s;
        x.powi(l as i32) * mp_pdf(mp, x) * 2.0 * w * s * c
    };
    adaptive_simpson(f, 0.0, FRAC_PI_2, QUAD_TOL)
}

pub struct MpTable {
    /// `(x, pdf, cdf)` on `points + 1` equally spaced points of `[a, b]`.
    pub density: Vec<[f64; 3]>,
    /// `(l, formula, quadrature, abs_error)`.
    pub moments: Vec<(u32, f64, f64, f64)>,
    pub checks: Vec<Check>,
}

pub fn mp_table(y: f64, points: usize, lmax: usize) -> Result<MpTable> {
    let mp = MpParams::new(y)?;
    let step = (mp.b() - mp.a()) / points as f64;
    let density = (0..=points)
        .map(|k| {
            let x = mp.a() + k as f64 * step;
            [x, mp_pdf(&mp, x), mp_cdf(&mp, x)]
        })
        .collect();
    let moments: Vec<_> = (1..=lmax as u32)
        .map(|l| {
            let (formula, quad) = (mp_moment(l, y), quadrature_moment(&mp, l));
            (l, formula, quad, (formula - quad).abs())
        })
        .collect();
    let worst = moments.iter().map(|r| r.3).fold(0.0, f64::max);
    let checks = vec![
        Check::at_most("total_mass_defect", (quadrature_moment(&mp, 0) - 1.0).abs(), 1e-8),
        Check::at_most("moment_defect", worst, 1e-8),
    ];
    Ok(MpTable { density, moments, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_ratio_table() {
        let t = mp_table(0.5, 10, 3).unwrap();
        assert_eq!(t.density.len(), 11);
        assert_eq!(t.density[0][2], 0.0);
        assert_eq!(t.density[10][2], 1.0);
        assert!((t.moments[1].1 - 1.5).abs() < 1e-15);
        assert!((t.moments[2].1 - 2.75).abs() < 1e-15);
        assert!(t.checks.iter().all(|c| c.pass));
    }
}
