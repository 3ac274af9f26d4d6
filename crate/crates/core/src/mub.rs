//! Families of mutually unbiased bases and their verification.
//!
//! Complete families are built for odd prime powers with the quadratic-phase
//! construction over GF(q): besides the standard basis, each `a` in GF(q)
//! contributes the basis `v_{a,b}(x) = q^{-1/2} exp(2 pi i tr(a x^2 + b x) / p)`.
//! Dimension 2 uses the Pauli eigenbases.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{prime_power, FieldCtx};
use crate::linalg::row_inner_products;

/// A set of `m` orthonormal bases of C^n, stored as `m * n` pool vectors.
///
/// Pool vector `basis * n + index` is the `index`-th vector of basis `basis`.
#[derive(Clone, Debug, PartialEq)]
pub struct MubFamily {
    n: usize,
    m: usize,
    data: Vec<Complex64>,
}

/// Position of a vector inside the pool.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PoolIndex {
    pub basis: usize,
    pub vector: usize,
}

#[derive(Serialize, Deserialize)]
struct BasisFile {
    n: usize,
    m: usize,
    bases: Vec<Vec<Vec<Complex64>>>,
}

impl MubFamily {
    /// Builds a family from nested `bases[basis][vector][coordinate]`.
    pub fn new(n: usize, bases: Vec<Vec<Vec<Complex64>>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let m = bases.len();
        if m > n + 1 {
            return Err(Error::InvalidParameter(format!(
                "{m} bases exceed the maximum n + 1 = {} for dimension {n}",
                n + 1
            )));
        }
        let mut data = Vec::with_capacity(m * n * n);
        for (b, basis) in bases.iter().enumerate() {
            if basis.len() != n {
                return Err(Error::DimensionMismatch(format!("basis {b} has {} vectors, expected {n}", basis.len())));
            }
            for (i, v) in basis.iter().enumerate() {
                if v.len() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "vector {i} of basis {b} has {} coordinates, expected {n}",
                        v.len()
                    )));
                }
                data.extend_from_slice(v);
            }
        }
        Ok(MubFamily { n, m, data })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn basis_count(&self) -> usize {
        self.m
    }

    pub fn pool_size(&self) -> usize {
        self.m * self.n
    }

    pub fn is_complete(&self) -> bool {
        self.m == self.n + 1
    }

    pub fn vector(&self, at: PoolIndex) -> &[Complex64] {
        self.pool_vector(self.flat_index(at))
    }

    pub fn pool_vector(&self, flat: usize) -> &[Complex64] {
        &self.data[flat * self.n..(flat + 1) * self.n]
    }

    pub fn flat_index(&self, at: PoolIndex) -> usize {
        assert!(at.basis < self.m && at.vector < self.n, "pool index out of range");
        at.basis * self.n + at.vector
    }

    pub fn pool_index(&self, flat: usize) -> PoolIndex {
        PoolIndex { basis: flat / self.n, vector: flat % self.n }
    }

    /// Vectors of one basis as a row-major `n x n` block.
    pub fn basis(&self, b: usize) -> &[Complex64] {
        &self.data[b * self.n * self.n..(b + 1) * self.n * self.n]
    }

    /// The first `m` bases of this family.
    pub fn truncated(&self, m: usize) -> Result<MubFamily> {
        if m > self.m {
            return Err(Error::InvalidParameter(format!("asked for {m} bases, family has {}", self.m)));
        }
        Ok(MubFamily { n: self.n, m, data: self.data[..m * self.n * self.n].to_vec() })
    }

    /// All pairwise inner products of the pool, row-major `(mn) x (mn)`.
    pub fn pool_gram(&self) -> Vec<Complex64> {
        let size = self.pool_size();
        row_inner_products(&self.data, size, &self.data, size, self.n)
    }

    pub fn to_json(&self) -> Result<String> {
        let bases = (0..self.m)
            .map(|b| self.basis(b).chunks(self.n).map(<[Complex64]>::to_vec).collect())
            .collect();
        Ok(serde_json::to_string(&BasisFile { n: self.n, m: self.m, bases })?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: BasisFile = serde_json::from_str(s)?;
        if file.bases.len() != file.m {
            return Err(Error::DimensionMismatch(format!(
                "header says m = {}, file holds {} bases",
                file.m,
                file.bases.len()
            )));
        }
        MubFamily::new(file.n, file.bases)
    }

    pub fn write_json(&self, path: &Path) -> std::io::Result<()> {
        let json = self.to_json().map_err(std::io::Error::other)?;
        fs::write(path, json)
    }

    pub fn read_json(path: &Path) -> std::io::Result<Self> {
        let s = fs::read_to_string(path)?;
        MubFamily::from_json(&s).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }
}

/// Complete family of `n + 1` MUBs for `n = 2` or an odd prime power.
pub fn construct_complete_mubs(n: u64) -> Result<MubFamily> {
    let (p, k) = prime_power(n).ok_or(Error::UnsupportedDimension(n))?;
    if n == 2 {
        return Ok(pauli_family());
    }
    if p == 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let field = FieldCtx::new(p, k).map_err(|_| Error::UnsupportedDimension(n))?;
    Ok(quadratic_phase_family(&field))
}

fn pauli_family() -> MubFamily {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let h = FRAC_1_SQRT_2;
    let bases = vec![
        vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]],
        vec![vec![c(h, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(-h, 0.0)]],
        vec![vec![c(h, 0.0), c(0.0, h)], vec![c(h, 0.0), c(0.0, -h)]],
    ];
    MubFamily::new(2, bases).expect("static family is well formed")
}

fn quadratic_phase_family(field: &FieldCtx) -> MubFamily {
    let q = field.order() as usize;
    let p = field.characteristic() as usize;
    let elems: Vec<_> = field.elements().collect();
    let squares: Vec<_> = elems.iter().map(|x| field.mul(x, x)).collect();

    // tr(a x^2) and tr(b x); tr is additive so tr(a x^2 + b x) is their sum mod p
    let mut quad = vec![0usize; q * q];
    let mut lin = vec![0usize; q * q];
    for (a, ea) in elems.iter().enumerate() {
        for x in 0..q {
            quad[a * q + x] = field.trace(&field.mul(ea, &squares[x])) as usize;
            lin[a * q + x] = field.trace(&field.mul(ea, &elems[x])) as usize;
        }
    }

    let scale = 1.0 / (q as f64).sqrt();
    let phases: Vec<Complex64> =
        (0..p).map(|t| Complex64::from_polar(scale, 2.0 * PI * t as f64 / p as f64)).collect();

    let m = q + 1;
    let mut data = vec![Complex64::new(0.0, 0.0); m * q * q];
    for i in 0..q {
        data[i * q + i] = Complex64::new(1.0, 0.0);
    }
    for a in 0..q {
        let block = &mut data[(a + 1) * q * q..(a + 2) * q * q];
        for b in 0..q {
            for x in 0..q {
                block[b * q + x] = phases[(quad[a * q + x] + lin[b * q + x]) % p];
            }
        }
    }
    MubFamily { n: q, m, data }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UnbiasednessReport {
    /// Largest |<v_i, v_j> - delta_ij| inside any basis.
    pub within_defect: f64,
    /// Largest ||<v_i, v_j>| - 1/sqrt(n)| across distinct bases.
    pub cross_defect: f64,
    pub pass: bool,
}

/// Visits every block `B_i B_j^*` with `j >= i`.
fn for_each_block(fam: &MubFamily, mut visit: impl FnMut(usize, usize, &[Complex64])) {
    let n = fam.n;
    for i in 0..fam.m {
        let rest = fam.m - i;
        let prods = row_inner_products(fam.basis(i), n, &fam.data[i * n * n..], rest * n, n);
        let width = rest * n;
        let mut block = vec![Complex64::new(0.0, 0.0); n * n];
        for dj in 0..rest {
            for r in 0..n {
                block[r * n..(r + 1) * n].copy_from_slice(&prods[r * width + dj * n..r * width + (dj + 1) * n]);
            }
            visit(i, i + dj, &block);
        }
    }
}

pub fn verify_unbiased(fam: &MubFamily, tol: f64) -> UnbiasednessReport {
    let n = fam.n;
    let target = 1.0 / (n as f64).sqrt();
    let mut within = 0.0f64;
    let mut cross = 0.0f64;
    for_each_block(fam, |i, j, block| {
        if i == j {
            for r in 0..n {
                for c in 0..n {
                    let expect = if r == c { 1.0 } else { 0.0 };
                    within = within.max((block[r * n + c] - expect).norm());
                }
            }
        } else {
            for z in block {
                cross = cross.max((z.norm() - target).abs());
            }
        }
    });
    UnbiasednessReport { within_defect: within, cross_defect: cross, pass: within <= tol && cross <= tol }
}

/// Largest cross-basis overlap; 0 when there is a single basis.
pub fn coherence(fam: &MubFamily) -> f64 {
    let mut worst = 0.0f64;
    for_each_block(fam, |i, j, block| {
        if i != j {
            worst = block.iter().fold(worst, |w, z| w.max(z.norm()));
        }
    });
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner;

    /// Direct O((mn)^2 n) check, independent of the GEMM path.
    fn naive_defects(fam: &MubFamily) -> (f64, f64) {
        let n = fam.dimension();
        let target = 1.0 / (n as f64).sqrt();
        let (mut within, mut cross) = (0.0f64, 0.0f64);
        for a in 0..fam.pool_size() {
            for b in a..fam.pool_size() {
                let z = inner(fam.pool_vector(a), fam.pool_vector(b));
                if a / n == b / n {
                    let expect = if a == b { 1.0 } else { 0.0 };
                    within = within.max((z - expect).norm());
                } else {
                    cross = cross.max((z.norm() - target).abs());
                }
            }
        }
        (within, cross)
    }

    #[test]
    fn pauli_family_is_unbiased() {
        let fam = construct_complete_mubs(2).unwrap();
        assert_eq!(fam.basis_count(), 3);
        let report = verify_unbiased(&fam, 1e-10);
        assert!(report.pass, "{report:?}");
        assert!((coherence(&fam) - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn small_prime_powers_match_naive_check() {
        for n in [3u64, 5, 7, 9, 25, 27] {
            let fam = construct_complete_mubs(n).unwrap();
            assert_eq!(fam.basis_count() as u64, n + 1);
            assert!(fam.is_complete());
            let report = verify_unbiased(&fam, 1e-10);
            let (w, c) = naive_defects(&fam);
            assert!(report.pass, "n = {n}: {report:?}");
            assert!(w < 1e-12 && c < 1e-12, "n = {n}: {w} {c}");
            assert!((report.within_defect - w).abs() < 1e-12);
            assert!((report.cross_defect - c).abs() < 1e-12);
        }
    }

    #[test]
    fn n3_all_cross_pairs_have_modulus_inv_sqrt3() {
        let fam = construct_complete_mubs(3).unwrap();
        let mut pairs = 0;
        for a in 0..12 {
            for b in a + 1..12 {
                if a / 3 != b / 3 {
                    pairs += 1;
                    let z = inner(fam.pool_vector(a), fam.pool_vector(b));
                    assert!((z.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
                }
            }
        }
        assert_eq!(pairs, 54);
    }

    #[test]
    fn n5_defects_tiny() {
        let fam = construct_complete_mubs(5).unwrap();
        let r = verify_unbiased(&fam, 1e-10);
        assert!(r.pass && r.within_defect < 1e-12 && r.cross_defect < 1e-12);
    }

    #[test]
    fn bases_are_unitary() {
        for n in [2u64, 3, 9, 11] {
            let fam = construct_complete_mubs(n).unwrap();
            let n = n as usize;
            for b in 0..fam.basis_count() {
                let prod = row_inner_products(fam.basis(b), n, fam.basis(b), n, n);
                for r in 0..n {
                    for c in 0..n {
                        let expect = if r == c { 1.0 } else { 0.0 };
                        assert!((prod[r * n + c] - expect).norm() <= 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn unsupported_dimensions() {
        for n in [0u64, 1, 4, 6, 8, 10, 12, 1331] {
            assert!(matches!(construct_complete_mubs(n), Err(Error::UnsupportedDimension(_))), "n = {n}");
        }
    }

    #[test]
    fn duplicated_basis_fails() {
        let fam = construct_complete_mubs(5).unwrap();
        let mut bases: Vec<Vec<Vec<Complex64>>> = (0..5)
            .map(|b| fam.basis(b).chunks(5).map(<[Complex64]>::to_vec).collect())
            .collect();
        bases.push(bases[2].clone());
        let dup = MubFamily::new(5, bases).unwrap();
        let r = verify_unbiased(&dup, 1e-10);
        assert!(!r.pass);
        assert!((r.cross_defect - (1.0 - 1.0 / 5f64.sqrt())).abs() < 1e-12);
        assert!((coherence(&dup) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coherence_values() {
        let fam = construct_complete_mubs(7).unwrap();
        assert!((coherence(&fam) - 1.0 / 7f64.sqrt()).abs() < 1e-12);
        assert_eq!(coherence(&fam.truncated(1).unwrap()), 0.0);
    }

    #[test]
    fn json_round_trip_and_shape_errors() {
        let fam = construct_complete_mubs(3).unwrap();
        let json = fam.to_json().unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["n"], 3);
        assert_eq!(value["m"], 4);
        assert_eq!(value["bases"][1][2].as_array().unwrap().len(), 3);
        assert_eq!(value["bases"][0][0][0], serde_json::json!([1.0, 0.0]));
        assert_eq!(MubFamily::from_json(&json).unwrap(), fam);

        let ragged = r#"{"n":2,"m":1,"bases":[[[[1,0],[0,0]],[[0,0]]]]}"#;
        assert!(matches!(MubFamily::from_json(ragged), Err(Error::DimensionMismatch(_))));
        let wrong_m = r#"{"n":1,"m":2,"bases":[[[[1,0]]]]}"#;
        assert!(matches!(MubFamily::from_json(wrong_m), Err(Error::DimensionMismatch(_))));
    }
}
