//! Hermitian eigensolver: Householder reduction to a real symmetric
//! tridiagonal matrix, then implicit QL with Wilkinson-style shifts (tql2).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{norm, CMatrix};
use crate::sampling::GramMatrix;

/// Inputs whose largest |A - A*| entry exceeds this are rejected.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues sorted ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Spectrum { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `(1/p) sum lambda_i^l`.
    pub fn moment(&self, l: u32) -> f64 {
        self.values.iter().map(|x| x.powi(l as i32)).sum::<f64>() / self.values.len() as f64
    }
}

pub fn eigenvalues_hermitian(g: &GramMatrix, tol: f64) -> Result<Spectrum> {
    hermitian_spectrum(g.matrix(), tol)
}

/// Eigenvalues of any Hermitian matrix, with every eigenpair checked to
/// satisfy `||A v - lambda v|| <= tol ||A||_F`.
pub fn hermitian_spectrum(a: &CMatrix, tol: f64) -> Result<Spectrum> {
    let (values, vectors) = hermitian_eigh(a)?;
    let scale = a.frobenius_norm();
    let n = values.len();
    for (j, &lambda) in values.iter().enumerate() {
        let v: Vec<Complex64> = (0..n).map(|i| vectors[(i, j)]).collect();
        let av = a.mul_vec(&v);
        let resid: Vec<Complex64> = av.iter().zip(&v).map(|(x, y)| x - y * lambda).collect();
        let r = norm(&resid);
        if r > tol * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Eigen(format!("residual {r:e} for eigenvalue {lambda} exceeds {tol:e} * {scale:e}")));
        }
    }
    Ok(Spectrum { values })
}

/// Eigenvalues (ascending) and unit eigenvectors (as columns).
pub(crate) fn hermitian_eigh(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let defect = a.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = a.rows();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let (diag, offdiag, q) = tridiagonalize(a);

    // Rotate the complex subdiagonal onto the nonnegative reals with a
    // diagonal unitary D, so that A = (Q D) T (Q D)^*.
    let mut phase = vec![Complex64::new(1.0, 0.0); n];
    let mut sub = vec![0.0; n];
    for i in 0..n - 1 {
        let s = offdiag[i];
        let r = s.norm();
        sub[i] = r;
        phase[i + 1] = if r > 0.0 { phase[i] * (s / r) } else { phase[i] };
    }
    let mut d = diag;
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql2(&mut d, &mut sub, &mut z, n)?;

    let vectors = CMatrix::from_fn(n, n, |i, j| (0..n).map(|k| q[(i, k)] * phase[k] * z[k * n + j]).sum());
    Ok((d, vectors))
}

/// Unitary similarity to Hermitian tridiagonal form. Returns the real
/// diagonal, the complex subdiagonal `T[i+1][i]`, and the accumulated `Q`.
fn tridiagonalize(a: &CMatrix) -> (Vec<f64>, Vec<Complex64>, CMatrix) {
    let n = a.rows();
    let mut w = a.clone();
    let mut q = CMatrix::identity(n);
    let zero = Complex64::new(0.0, 0.0);

    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| w[(i, k)]).collect();
        let sigma = norm(&x);
        let tail = norm(&x[1..]);
        if tail == 0.0 {
            continue;
        }
        let x0 = x[0];
        let unit = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -unit * sigma;
        let mut v = x;
        v[0] -= alpha;
        let vn = norm(&v);
        v.iter_mut().for_each(|z| *z /= vn);

        // H = I - 2 v v^* on indices k+1..n maps x to alpha e_1
        let m = n - k - 1;
        w[(k + 1, k)] = alpha;
        w[(k, k + 1)] = alpha.conj();
        for i in k + 2..n {
            w[(i, k)] = zero;
            w[(k, i)] = zero;
        }

        // trailing block: B <- B - v w^* - w v^*, u = 2 B v, w = u - (v^* u) v
        let mut u = vec![zero; m];
        for (r, ur) in u.iter_mut().enumerate() {
            let mut acc = zero;
            for c in 0..m {
                acc += w[(k + 1 + r, k + 1 + c)] * v[c];
            }
            *ur = acc * 2.0;
        }
        let vu: Complex64 = v.iter().zip(&u).map(|(a, b)| a.conj() * b).sum();
        let wv: Vec<Complex64> = u.iter().zip(&v).map(|(ui, vi)| ui - vu * vi).collect();
        for r in 0..m {
            for c in 0..m {
                w[(k + 1 + r, k + 1 + c)] -= v[r] * wv[c].conj() + wv[r] * v[c].conj();
            }
        }

        // Q <- Q H
        for r in 0..n {
            let mut dot = zero;
            for c in 0..m {
                dot += q[(r, k + 1 + c)] * v[c];
            }
            let dot = dot * 2.0;
            for c in 0..m {
                q[(r, k + 1 + c)] -= dot * v[c].conj();
            }
        }
    }

    let diag = (0..n).map(|i| w[(i, i)].re).collect();
    let sub = (0..n.saturating_sub(1)).map(|i| w[(i + 1, i)]).collect();
    (diag, sub, q)
}

/// Symmetric tridiagonal QL. `d` holds the diagonal, `e[i]` the entry
/// coupling `i` and `i + 1` (with `e[n-1]` ignored); `z` (row-major, n x n)
/// is multiplied on the right by the accumulated rotations. On return `d`
/// holds ascending eigenvalues and the columns of `z` are permuted to match.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [f64], n: usize) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::Eigen(format!("QL iteration did not converge at index {l}")));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let zi1 = z[k * n + i + 1];
                        let zi = z[k * n + i];
                        z[k * n + i + 1] = s * zi + c * zi1;
                        z[k * n + i] = c * zi - s * zi1;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // selection sort keeps eigenvector columns aligned
    for i in 0..n - 1 {
        let mut k = i;
        for j in i + 1..n {
            if d[j] < d[k] {
                k = j;
            }
        }
        if k != i {
            d.swap(i, k);
            for r in 0..n {
                z.swap(r * n + i, r * n + k);
            }
        }
    }
    Ok(())
}
