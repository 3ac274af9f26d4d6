//! Exact path weights by exhaustive averaging over pool assignments.
//!
//! For a closed path `gamma` and an assignment `s` of pool vectors to its
//! vertices, `omega_gamma(s)` is the product of `<s(gamma(i)), s(gamma(i+1))>`
//! along the path. `W_gamma` is the average of `omega_gamma` over all
//! `(mn)^v` assignments. Every function here computes such averages by brute
//! force, so the costs are guarded.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::combinat::falling_factorial;
use crate::error::{Error, Result};
use crate::mub::MubFamily;
use crate::paths::path::{enumerate_path_pairs, enumerate_paths, relabel_first_seen, ClosedPath};
use crate::paths::reduce::in_gamma;
use crate::sampling::{gram, trace_moment, SampleMatrix};

/// Cap on `(mn)^v` for a single weight.
pub const WEIGHT_COST_GUARD: f64 = 1e7;
/// Cap on `(mn)^p` for averages over every sample map.
pub const SAMPLE_MAP_GUARD: f64 = 1e6;
/// Longest path accepted by [`expectation_exact`].
pub const MAX_EXPECTATION_LEN: usize = 6;
/// Longest path accepted by [`variance_exact`].
pub const MAX_VARIANCE_LEN: usize = 3;

/// Pool vectors assigned to path vertices, indexed by vertex label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathAssignment {
    vectors: Vec<Option<usize>>,
}

impl PathAssignment {
    /// Vertex `z` (0-based label) gets pool vector `vectors[z]`.
    pub fn new(vectors: Vec<usize>) -> Self {
        PathAssignment { vectors: vectors.into_iter().map(Some).collect() }
    }

    /// Assigns only the listed `(label, pool vector)` pairs.
    pub fn partial(pairs: &[(usize, usize)]) -> Self {
        let len = pairs.iter().map(|&(z, _)| z + 1).max().unwrap_or(0);
        let mut vectors = vec![None; len];
        for &(z, s) in pairs {
            vectors[z] = Some(s);
        }
        PathAssignment { vectors }
    }

    pub fn get(&self, label: usize) -> Option<usize> {
        self.vectors.get(label).copied().flatten()
    }

    fn require(&self, path: &ClosedPath) -> Result<Vec<usize>> {
        path.word().iter().map(|&z| self.get(z).ok_or(Error::UnassignedVertex(z + 1))).collect()
    }
}

/// `N`: distinct vectors used; `C`: steps whose endpoints get different vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AssignmentStats {
    pub distinct: usize,
    pub crossings: usize,
}

pub fn assignment_stats(path: &ClosedPath, s: &PathAssignment) -> Result<AssignmentStats> {
    let image = s.require(path)?;
    let crossings = image.windows(2).filter(|w| w[0] != w[1]).count();
    let mut distinct = image.clone();
    distinct.sort_unstable();
    distinct.dedup();
    Ok(AssignmentStats { distinct: distinct.len(), crossings })
}

pub fn omega(path: &ClosedPath, s: &PathAssignment, fam: &MubFamily) -> Result<Complex64> {
    let image = s.require(path)?;
    Ok(image
        .windows(2)
        .map(|w| crate::linalg::inner(fam.pool_vector(w[0]), fam.pool_vector(w[1])))
        .product())
}

/// What the weight lemma predicts for a path.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum WClass {
    /// Double tree: `W = n^{1-v}` exactly.
    GammaMember { predicted: f64 },
    /// Otherwise `|W| <= K n^{1-v} (1/m + 1/n)`; `bound` holds the `K = 1` value.
    NonMember { bound: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WValue {
    pub value: Complex64,
    pub class: WClass,
}

impl WValue {
    /// `|W - n^{1-v}|` for members, `|W| / bound` for non-members.
    pub fn deviation(&self) -> f64 {
        match self.class {
            WClass::GammaMember { predicted } => (self.value - predicted).norm(),
            WClass::NonMember { bound } => self.value.norm() / bound,
        }
    }
}

pub fn classify(path: &ClosedPath, fam: &MubFamily) -> WClass {
    let n = fam.dimension() as f64;
    let m = fam.basis_count() as f64;
    let base = n.powi(1 - path.vertex_count() as i32);
    if in_gamma(path) {
        WClass::GammaMember { predicted: base }
    } else {
        WClass::NonMember { bound: base * (1.0 / m + 1.0 / n) }
    }
}

/// Pool inner products and the odometer that walks all assignments.
struct Oracle {
    size: usize,
    table: Vec<Complex64>,
}

impl Oracle {
    fn new(fam: &MubFamily) -> Result<Self> {
        if fam.pool_size() == 0 {
            return Err(Error::EmptyFamily);
        }
        Ok(Oracle { size: fam.pool_size(), table: fam.pool_gram() })
    }

    fn guard(&self, vertices: usize, cap: f64) -> Result<()> {
        let cost = (self.size as f64).powi(vertices as i32);
        if cost > cap {
            return Err(Error::CostGuard { cost, guard: cap });
        }
        Ok(())
    }

    fn product(&self, edges: &[(usize, usize)], s: &[usize]) -> Complex64 {
        edges.iter().map(|&(a, b)| self.table[s[a] * self.size + s[b]]).product()
    }

    /// Mean of `f(s)` over all `s: [0, vertices) -> pool`.
    fn average(&self, vertices: usize, mut f: impl FnMut(&[usize]) -> Complex64) -> Complex64 {
        let mut s = vec![0usize; vertices];
        let mut total = Complex64::new(0.0, 0.0);
        let mut count = 0u64;
        loop {
            total += f(&s);
            count += 1;
            let mut k = 0;
            while k < vertices {
                s[k] += 1;
                if s[k] < self.size {
                    break;
                }
                s[k] = 0;
                k += 1;
            }
            if k == vertices {
                break;
            }
        }
        total / count as f64
    }
}

fn canonical_edges(path: &ClosedPath) -> (usize, Vec<(usize, usize)>) {
    let c = path.canonical();
    (c.vertex_count(), c.edges().collect())
}

/// `W_gamma` by exhaustive averaging, tagged with the lemma's prediction.
pub fn w_exact(path: &ClosedPath, fam: &MubFamily) -> Result<WValue> {
    let oracle = Oracle::new(fam)?;
    let value = w_with(&oracle, path)?;
    Ok(WValue { value, class: classify(path, fam) })
}

fn w_with(oracle: &Oracle, path: &ClosedPath) -> Result<Complex64> {
    let (v, edges) = canonical_edges(path);
    oracle.guard(v, WEIGHT_COST_GUARD)?;
    Ok(oracle.average(v, |s| oracle.product(&edges, s)))
}

fn require_real(z: Complex64) -> Result<f64> {
    if z.im.abs() > 1e-10 {
        return Err(Error::NotReal(z.im));
    }
    Ok(z.re)
}

/// `E(A_l) = (1/p) sum_gamma p!/(p - v)! W_gamma` over canonical paths.
/// Paths with more than `p` vertices have no labelings and drop out.
pub fn expectation_exact(l: usize, p: usize, fam: &MubFamily) -> Result<f64> {
    if l > MAX_EXPECTATION_LEN {
        return Err(Error::PathTooLong { len: l, cap: MAX_EXPECTATION_LEN });
    }
    if p == 0 {
        return Err(Error::InvalidParameter("row count must be positive".into()));
    }
    let oracle = Oracle::new(fam)?;
    let mut total = Complex64::new(0.0, 0.0);
    for g in enumerate_paths(l)? {
        let v = g.vertex_count();
        if v > p {
            continue;
        }
        total += w_with(&oracle, &g)? * falling_factorial(p as u64, v as u64) as f64;
    }
    require_real(total / p as f64)
}

/// Joins two paths at a shared vertex: walk `gamma_1`, then `gamma_2`
/// backwards. Both are first rotated to start at the smallest shared label.
pub fn join(g1: &ClosedPath, g2: &ClosedPath) -> Result<ClosedPath> {
    let v2 = g2.vertices();
    let shared = g1.vertices().into_iter().find(|z| v2.contains(z)).ok_or(Error::DisjointPaths)?;
    let start1 = g1.cycle().iter().position(|&z| z == shared).expect("shared vertex on path 1");
    let start2 = g2.cycle().iter().position(|&z| z == shared).expect("shared vertex on path 2");
    let r1 = g1.rotated(start1);
    let r2 = g2.rotated(start2);
    let (l1, l2) = (r1.len(), r2.len());
    let word: Vec<usize> = (0..=l1 + l2)
        .map(|i| if i <= l1 { r1.word()[i] } else { r2.word()[l1 + l2 - i] })
        .collect();
    Ok(ClosedPath::new(word)?.canonical())
}

/// `E(omega_1(s) conj(omega_2(s)))` over assignments of the union of the
/// vertex sets; labels are shared between the two paths.
pub fn w_pair_exact(g1: &ClosedPath, g2: &ClosedPath, fam: &MubFamily) -> Result<Complex64> {
    let oracle = Oracle::new(fam)?;
    w_pair_with(&oracle, g1, g2)
}

fn w_pair_with(oracle: &Oracle, g1: &ClosedPath, g2: &ClosedPath) -> Result<Complex64> {
    let joint: Vec<usize> = g1.cycle().iter().chain(g2.cycle()).copied().collect();
    let relabeled = relabel_first_seen(&joint);
    let v = relabeled.iter().max().map_or(0, |&x| x + 1);
    oracle.guard(v, WEIGHT_COST_GUARD)?;
    let (c1, c2) = relabeled.split_at(g1.len());
    let e1: Vec<_> = ClosedPath::from_cycle(c1).edges().collect();
    let e2: Vec<_> = ClosedPath::from_cycle(c2).edges().collect();
    Ok(oracle.average(v, |s| oracle.product(&e1, s) * oracle.product(&e2, s).conj()))
}

/// Mean and variance of `A_l` over every sample map `[1..p] -> pool`,
/// computed from Gram matrix traces.
pub fn sample_map_moments(l: usize, p: usize, fam: &MubFamily) -> Result<(f64, f64)> {
    let oracle = Oracle::new(fam)?;
    oracle.guard(p, SAMPLE_MAP_GUARD)?;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut count = 0u64;
    let mut err = None;
    oracle.average(p, |s| {
        match SampleMatrix::from_pool(fam, s.to_vec()).and_then(|x| trace_moment(&gram(&x), l)) {
            Ok(a) => {
                sum += a;
                sum_sq += a * a;
            }
            Err(e) => err = Some(e),
        }
        count += 1;
        Complex64::new(0.0, 0.0)
    });
    if let Some(e) = err {
        return Err(e);
    }
    let mean = sum / count as f64;
    Ok((mean, (sum_sq / count as f64 - mean * mean).max(0.0)))
}

/// `Var(A_l)` two ways: the sum over pair classes of
/// `p!/(p - v)! (W_{gamma_1, gamma_2} - W_1 conj(W_2)) / p^2`, and direct
/// averaging over every sample map. Fails unless they agree to 1e-10.
pub fn variance_exact(l: usize, p: usize, fam: &MubFamily) -> Result<f64> {
    if l > MAX_VARIANCE_LEN {
        return Err(Error::PathTooLong { len: l, cap: MAX_VARIANCE_LEN });
    }
    if l == 0 || p == 0 {
        return Err(Error::InvalidParameter("moment order and row count must be positive".into()));
    }
    let oracle = Oracle::new(fam)?;
    oracle.guard(p, SAMPLE_MAP_GUARD)?;

    let mut singles: HashMap<ClosedPath, Complex64> = HashMap::new();
    let mut single = |g: &ClosedPath| -> Result<Complex64> {
        let key = g.canonical();
        if let Some(&w) = singles.get(&key) {
            return Ok(w);
        }
        let w = w_with(&oracle, &key)?;
        singles.insert(key, w);
        Ok(w)
    };

    let mut total = Complex64::new(0.0, 0.0);
    for (g1, g2) in enumerate_path_pairs(l, l)? {
        let mut union = g1.vertices();
        union.extend(g2.vertices());
        union.sort_unstable();
        union.dedup();
        if union.len() > p {
            continue;
        }
        let diff = w_pair_with(&oracle, &g1, &g2)? - single(&g1)? * single(&g2)?.conj();
        total += diff * falling_factorial(p as u64, union.len() as u64) as f64;
    }
    let by_pairs = require_real(total / (p * p) as f64)?;
    let (_, direct) = sample_map_moments(l, p, fam)?;
    if (by_pairs - direct).abs() > 1e-10 {
        return Err(Error::OracleMismatch { left: by_pairs, right: direct });
    }
    Ok(by_pairs)
}
