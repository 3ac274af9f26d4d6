//! Dense complex matrices, just enough for Gram matrices and the eigensolver.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

/// Hermitian inner product, linear in the first argument.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm(u: &[Complex64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        CMatrix { rows: r, cols: c, data: rows.concat() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matmul");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, a) in self.row(i).iter().enumerate() {
                if *a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry of |A - A*|.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `a * conj(b)^T` for row-major `a` (r1 x k) and `b` (r2 x k), i.e. all
/// pairwise inner products of the rows. Backed by a blocked GEMM kernel.
pub fn row_inner_products(a: &[Complex64], r1: usize, b: &[Complex64], r2: usize, k: usize) -> Vec<Complex64> {
    assert_eq!(a.len(), r1 * k);
    assert_eq!(b.len(), r2 * k);
    let b_conj: Vec<Complex64> = b.iter().map(|z| z.conj()).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); r1 * r2];
    if r1 == 0 || r2 == 0 || k == 0 {
        return out;
    }
    // SAFETY: Complex64 is repr(C) { re, im }, layout-identical to [f64; 2];
    // all strides describe in-bounds row-major buffers of the sizes asserted above.
    unsafe {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Standard,
            r1,
            k,
            r2,
            [1.0, 0.0],
            a.as_ptr() as *const [f64; 2],
            k as isize,
            1,
            b_conj.as_ptr() as *const [f64; 2],
            1,
            k as isize,
            [0.0, 0.0],
            out.as_mut_ptr() as *mut [f64; 2],
            r2 as isize,
            1,
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inner_is_conjugate_linear_in_second_slot() {
        let u = [c(1.0, 0.0), c(0.0, 1.0)];
        let v = [c(0.0, 1.0), c(1.0, 0.0)];
        // 1 * conj(i) + i * conj(1) = -i + i = 0
        assert_eq!(inner(&u, &v), c(0.0, 0.0));
        assert_eq!(inner(&u, &u), c(2.0, 0.0));
    }

    #[test]
    fn gemm_matches_naive_inner_products() {
        let a: Vec<Complex64> = (0..12).map(|i| c(i as f64 * 0.3 - 1.0, (i % 5) as f64)).collect();
        let b: Vec<Complex64> = (0..8).map(|i| c((i % 3) as f64, -(i as f64) * 0.1)).collect();
        let out = row_inner_products(&a, 3, &b, 2, 4);
        for i in 0..3 {
            for j in 0..2 {
                let naive = inner(&a[i * 4..i * 4 + 4], &b[j * 4..j * 4 + 4]);
                assert!((out[i * 2 + j] - naive).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn matmul_and_adjoint() {
        let a = CMatrix::from_rows(&[vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(0.0, -1.0), c(3.0, 0.5)]]);
        let i = CMatrix::identity(2);
        assert_eq!(a.matmul(&i), a);
        let h = a.matmul(&a.adjoint());
        assert!(h.hermitian_defect() < 1e-14);
        assert!(a.hermitian_defect() > 0.5);
    }
}
