//! The Marchenko-Pastur law with ratio `y` in (0, 1).

use std::f64::consts::PI;

use serde::Serialize;

use crate::combinat::narayana;
use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;

const CDF_TOL: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MpParams {
    y: f64,
    a: f64,
    b: f64,
}

impl MpParams {
    pub fn new(y: f64) -> Result<Self> {
        if !(y > 0.0 && y < 1.0) {
            return Err(Error::InvalidParameter(format!("MP ratio y = {y} must lie in (0, 1)")));
        }
        let r = y.sqrt();
        Ok(MpParams { y, a: (1.0 - r).powi(2), b: (1.0 + r).powi(2) })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// Lower support edge `(1 - sqrt y)^2`.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Upper support edge `(1 + sqrt y)^2`.
    pub fn b(&self) -> f64 {
        self.b
    }
}

pub fn mp_pdf(params: &MpParams, x: f64) -> f64 {
    let MpParams { y, a, b } = *params;
    if x <= a || x >= b {
        return 0.0;
    }
    ((b - x) * (x - a)).sqrt() / (2.0 * PI * x * y)
}

/// CDF by quadrature in `theta`, where `x = a + (b - a) sin^2 theta`; the
/// substitution turns the square-root edges into a smooth integrand.
pub fn mp_cdf(params: &MpParams, x: f64) -> f64 {
    let MpParams { y, a, b } = *params;
    if x <= a {
        return 0.0;
    }
    if x >= b {
        return 1.0;
    }
    let w = b - a;
    let upper = ((x - a) / w).sqrt().asin();
    let integrand = |t: f64| {
        let (s, c) = t.sin_cos();
        let xt = a + w * s * s;
        w * w * s * s * c * c / (PI * y * xt)
    };
    adaptive_simpson(integrand, 0.0, upper, CDF_TOL).clamp(0.0, 1.0)
}

/// Smallest `x` with `mp_cdf(x) >= u`, by bisection.
pub fn mp_quantile(params: &MpParams, u: f64) -> f64 {
    let (mut lo, mut hi) = (params.a, params.b);
    if u <= 0.0 {
        return lo;
    }
    if u >= 1.0 {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mp_cdf(params, mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `sum_{v=1}^{l} y^{v-1} C(l, v-1) C(l-1, v-1) / v`. The zeroth moment is 1.
pub fn mp_moment(l: u32, y: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    (1..=l as u64).map(|v| y.powi(v as i32 - 1) * narayana(l as u64, v) as f64).sum()
}
