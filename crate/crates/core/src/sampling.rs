//! Sampling rows from the pool and forming Gram matrices.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{row_inner_products, CMatrix};
use crate::mub::{MubFamily, PoolIndex};
use crate::rng::{rng_from_seed, substream_seed};

/// Shape of a sampling experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub y: f64,
    pub seed: u64,
    pub trials: usize,
    /// Set when `m < sqrt(n)`, outside the regime where MP convergence is guaranteed.
    pub few_bases: bool,
}

impl SampleSpec {
    /// `p = round(y * n)`, rounding half to even.
    pub fn from_ratio(n: usize, m: usize, y: f64, seed: u64, trials: usize) -> Result<Self> {
        if !(y > 0.0 && y < 1.0) {
            return Err(Error::InvalidParameter(format!("ratio y = {y} must lie in (0, 1)")));
        }
        if trials == 0 {
            return Err(Error::InvalidParameter("trials must be positive".into()));
        }
        if m == 0 || m > n + 1 {
            return Err(Error::InvalidParameter(format!("basis count m = {m} must lie in [1, n + 1]")));
        }
        let p = (y * n as f64).round_ties_even() as usize;
        if p < 1 || p >= n {
            return Err(Error::InvalidParameter(format!("row count p = {p} must satisfy 1 <= p < n = {n}")));
        }
        Ok(SampleSpec { n, m, p, y, seed, trials, few_bases: (m as f64) < (n as f64).sqrt() })
    }
}

/// `p` rows drawn from the pool, with where each one came from.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleMatrix {
    n: usize,
    rows: Vec<usize>,
    provenance: Vec<PoolIndex>,
    data: Vec<Complex64>,
    seed: Option<u64>,
}

impl SampleMatrix {
    /// Assembles the sample whose rows are the given pool vectors.
    pub fn from_pool(fam: &MubFamily, rows: Vec<usize>) -> Result<Self> {
        if fam.pool_size() == 0 {
            return Err(Error::EmptyFamily);
        }
        if let Some(&bad) = rows.iter().find(|&&r| r >= fam.pool_size()) {
            return Err(Error::InvalidParameter(format!("pool index {bad} out of range")));
        }
        let n = fam.dimension();
        let mut data = Vec::with_capacity(rows.len() * n);
        for &r in &rows {
            data.extend_from_slice(fam.pool_vector(r));
        }
        let provenance = rows.iter().map(|&r| fam.pool_index(r)).collect();
        Ok(SampleMatrix { n, rows, provenance, data, seed: None })
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Flat pool indices of the rows.
    pub fn pool_rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn provenance(&self) -> &[PoolIndex] {
        &self.provenance
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
}

/// Draws `p` rows independently and uniformly, with replacement.
pub fn draw_sample<R: Rng + ?Sized>(fam: &MubFamily, p: usize, rng: &mut R) -> Result<SampleMatrix> {
    if fam.pool_size() == 0 {
        return Err(Error::EmptyFamily);
    }
    if p == 0 {
        return Err(Error::InvalidParameter("row count must be positive".into()));
    }
    let rows = (0..p).map(|_| rng.gen_range(0..fam.pool_size())).collect();
    SampleMatrix::from_pool(fam, rows)
}

/// Draws the sample for `trial` of a run seeded with `seed`.
pub fn draw_trial(fam: &MubFamily, p: usize, seed: u64, trial: u64) -> Result<SampleMatrix> {
    let sub = substream_seed(seed, trial);
    let mut sample = draw_sample(fam, p, &mut rng_from_seed(sub))?;
    sample.seed = Some(sub);
    Ok(sample)
}

/// Hermitian `p x p` matrix of row inner products, `G[i][j] = <row_i, row_j>`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix(CMatrix);

impl GramMatrix {
    /// Wraps an arbitrary matrix; used for tests and for externally built inputs.
    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!("{} x {} matrix is not square", m.rows(), m.cols())));
        }
        Ok(GramMatrix(m))
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }
}

/// Rows are unit vectors, so the diagonal is set to exactly 1 and the lower
/// triangle mirrors the upper one; the result is exactly Hermitian.
pub fn gram(sample: &SampleMatrix) -> GramMatrix {
    let p = sample.row_count();
    let prods = row_inner_products(&sample.data, p, &sample.data, p, sample.n);
    GramMatrix(CMatrix::from_fn(p, p, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => Complex64::new(1.0, 0.0),
        std::cmp::Ordering::Less => prods[i * p + j],
        std::cmp::Ordering::Greater => prods[j * p + i].conj(),
    }))
}

/// `A_l = Tr(G^l) / p` by repeated multiplication.
pub fn trace_moment(g: &GramMatrix, l: usize) -> Result<f64> {
    if l == 0 {
        return Err(Error::InvalidParameter("moment order must be positive".into()));
    }
    let p = g.size();
    if p == 0 {
        return Err(Error::InvalidParameter("empty Gram matrix".into()));
    }
    let mut power = g.0.clone();
    for _ in 1..l {
        power = power.matmul(&g.0);
    }
    let tr = power.trace();
    if tr.im.abs() > 1e-10 * tr.re.abs().max(1.0) {
        return Err(Error::NotReal(tr.im));
    }
    Ok(tr.re / p as f64)
}

/// JSON sidecar describing which pool vectors each trial used.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleMetadata {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub y: f64,
    pub trial_seeds: Vec<u64>,
    pub provenance: Vec<Vec<PoolIndex>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub::construct_complete_mubs;
    use crate::rng::rng_from_seed;

    fn assert_gram_invariants(g: &GramMatrix) {
        let m = g.matrix();
        assert!(m.hermitian_defect() <= 1e-12);
        for i in 0..g.size() {
            assert!((m[(i, i)] - 1.0).norm() <= 1e-12);
        }
    }

    #[test]
    fn shape_from_ratio() {
        let s = SampleSpec::from_ratio(13, 14, 0.5, 1, 10).unwrap();
        assert_eq!(s.p, 6);
        assert!(!s.few_bases);
        let s = SampleSpec::from_ratio(121, 122, 0.5, 1, 10).unwrap();
        assert_eq!(s.p, 60);
        assert!(SampleSpec::from_ratio(121, 5, 0.5, 1, 1).unwrap().few_bases);
        assert!(SampleSpec::from_ratio(13, 14, 0.5, 1, 0).is_err());
        assert!(SampleSpec::from_ratio(13, 14, 1.0, 1, 1).is_err());
        assert!(SampleSpec::from_ratio(13, 15, 0.5, 1, 1).is_err());
        assert!(SampleSpec::from_ratio(3, 4, 0.01, 1, 1).is_err());
    }

    #[test]
    fn rows_are_pool_vectors() {
        let fam = construct_complete_mubs(5).unwrap();
        let s = draw_sample(&fam, 4, &mut rng_from_seed(9)).unwrap();
        for i in 0..4 {
            assert_eq!(s.row(i), fam.vector(s.provenance()[i]));
            let norm: f64 = s.row(i).iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn draws_are_deterministic() {
        let fam = construct_complete_mubs(3).unwrap();
        let a = draw_sample(&fam, 2, &mut rng_from_seed(42)).unwrap();
        let b = draw_sample(&fam, 2, &mut rng_from_seed(42)).unwrap();
        assert_eq!(a.provenance(), b.provenance());
        let t = draw_trial(&fam, 2, 42, 3).unwrap();
        assert_eq!(t, draw_trial(&fam, 2, 42, 3).unwrap());
        assert_eq!(t.seed(), Some(substream_seed(42, 3)));
    }

    #[test]
    fn empty_family_rejected() {
        let fam = construct_complete_mubs(3).unwrap().truncated(0).unwrap();
        assert!(matches!(draw_sample(&fam, 1, &mut rng_from_seed(0)), Err(Error::EmptyFamily)));
    }

    #[test]
    fn single_row_frequencies_are_uniform() {
        let fam = construct_complete_mubs(3).unwrap();
        let mut rng = rng_from_seed(2024);
        let mut counts = [0usize; 12];
        let draws = 100_000;
        for _ in 0..draws {
            let s = draw_sample(&fam, 1, &mut rng).unwrap();
            counts[s.pool_rows()[0]] += 1;
        }
        for c in counts {
            let freq = c as f64 / draws as f64;
            assert!((freq - 1.0 / 12.0).abs() <= 0.01, "{counts:?}");
        }
    }

    #[test]
    fn gram_small_cases() {
        let fam = construct_complete_mubs(3).unwrap();
        let one = gram(&SampleMatrix::from_pool(&fam, vec![4]).unwrap());
        assert_eq!(one.size(), 1);
        assert!((one.matrix()[(0, 0)] - 1.0).norm() < 1e-15);

        let twin = gram(&SampleMatrix::from_pool(&fam, vec![5, 5]).unwrap());
        for i in 0..2 {
            for j in 0..2 {
                assert!((twin.matrix()[(i, j)] - 1.0).norm() < 1e-12);
            }
        }

        // rows 0 (standard basis) and 7 (basis 2)
        let cross = gram(&SampleMatrix::from_pool(&fam, vec![0, 7]).unwrap());
        assert!((cross.matrix()[(0, 1)].norm() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert_gram_invariants(&cross);
    }

    #[test]
    fn trace_moment_identities() {
        let fam = construct_complete_mubs(7).unwrap();
        let mut rng = rng_from_seed(5);
        for _ in 0..20 {
            let g = gram(&draw_sample(&fam, 5, &mut rng).unwrap());
            assert_gram_invariants(&g);
            assert_eq!(trace_moment(&g, 1).unwrap(), 1.0);
            let sq: f64 = g.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>() / 5.0;
            assert!((trace_moment(&g, 2).unwrap() - sq).abs() < 1e-12);
        }
        assert!(trace_moment(&gram(&draw_sample(&fam, 2, &mut rng).unwrap()), 0).is_err());
    }

    #[test]
    fn third_moment_of_two_by_two() {
        // rows from two different bases of n = 3 give |G_01| = c = 1/sqrt 3
        let fam = construct_complete_mubs(3).unwrap();
        let g = gram(&SampleMatrix::from_pool(&fam, vec![1, 10]).unwrap());
        let c2 = g.matrix()[(0, 1)].norm_sqr();
        assert!((trace_moment(&g, 3).unwrap() - (1.0 + 3.0 * c2)).abs() < 1e-12);
        assert!((c2 - 1.0 / 3.0).abs() < 1e-12);
    }
}
