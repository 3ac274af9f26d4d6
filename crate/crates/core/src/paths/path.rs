//! Closed paths up to relabeling of their vertices.

use std::fmt;

use crate::error::{Error, Result};

/// Longest path length `enumerate_paths` will produce.
pub const MAX_PATH_LEN: usize = 8;

/// A closed path `gamma(0), ..., gamma(l)` with `gamma(0) == gamma(l)`.
///
/// Labels are stored 0-based; [`fmt::Display`] and [`ClosedPath::from_labels`]
/// use the 1-based labels of the mathematical notation. A path is canonical
/// when its labels form a restricted growth string: the first vertex is 0 and
/// each new vertex receives the smallest unused label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedPath {
    word: Vec<usize>,
}

impl ClosedPath {
    /// From a 0-based word of length `l + 1`.
    pub fn new(word: Vec<usize>) -> Result<Self> {
        if word.len() < 2 {
            return Err(Error::InvalidParameter("a closed path has length at least 1".into()));
        }
        if word[0] != word[word.len() - 1] {
            return Err(Error::InvalidParameter(format!("path {word:?} does not return to its start")));
        }
        Ok(ClosedPath { word })
    }

    /// From 1-based labels, e.g. `[1, 2, 1]`.
    pub fn from_labels(labels: &[usize]) -> Result<Self> {
        if labels.contains(&0) {
            return Err(Error::InvalidParameter("labels are positive".into()));
        }
        Self::new(labels.iter().map(|&x| x - 1).collect())
    }

    /// From the cyclic word `gamma(0), ..., gamma(l-1)`.
    pub fn from_cycle(cycle: &[usize]) -> Self {
        assert!(!cycle.is_empty(), "empty cycle");
        let mut word = cycle.to_vec();
        word.push(cycle[0]);
        ClosedPath { word }
    }

    /// Path length `l`.
    pub fn len(&self) -> usize {
        self.word.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// The first `l` entries; position `i` steps to `(i + 1) % l`.
    pub fn cycle(&self) -> &[usize] {
        &self.word[..self.len()]
    }

    /// Distinct labels, ascending.
    pub fn vertices(&self) -> Vec<usize> {
        let mut v = self.cycle().to_vec();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().len()
    }

    /// 1-based labels.
    pub fn labels(&self) -> Vec<usize> {
        self.word.iter().map(|&x| x + 1).collect()
    }

    /// Steps `(gamma(i), gamma(i+1))` for `i < l`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.word.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn canonical(&self) -> ClosedPath {
        ClosedPath::from_cycle(&relabel_first_seen(self.cycle()))
    }

    pub fn is_canonical(&self) -> bool {
        relabel_first_seen(self.cycle()) == self.cycle()
    }

    /// The path started at position `shift` of the cycle.
    pub fn rotated(&self, shift: usize) -> ClosedPath {
        let c = self.cycle();
        let l = c.len();
        let rotated: Vec<usize> = (0..l).map(|i| c[(i + shift) % l]).collect();
        ClosedPath::from_cycle(&rotated)
    }
}

impl fmt::Display for ClosedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.word.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", x + 1)?;
        }
        write!(f, ")")
    }
}

/// Relabels so that labels appear in order 0, 1, 2, ... of first occurrence.
pub(crate) fn relabel_first_seen(word: &[usize]) -> Vec<usize> {
    let mut map: Vec<(usize, usize)> = Vec::new();
    word.iter()
        .map(|&x| match map.iter().find(|(from, _)| *from == x) {
            Some(&(_, to)) => to,
            None => {
                let to = map.len();
                map.push((x, to));
                to
            }
        })
        .collect()
}

/// Restricted growth strings of the given length, in lexicographic order.
fn restricted_growth_strings(len: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, max: usize, len: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for next in 0..=max + 1 {
            prefix.push(next);
            extend(prefix, max.max(next), len, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if len == 0 {
        return out;
    }
    let mut prefix = vec![0];
    extend(&mut prefix, 0, len, &mut out);
    out
}

/// One canonical representative per relabeling class of closed paths of
/// length `l`, in lexicographic order. Assumes enough labels (`p >= l`).
pub fn enumerate_paths(l: usize) -> Result<Vec<ClosedPath>> {
    if l > MAX_PATH_LEN {
        return Err(Error::PathTooLong { len: l, cap: MAX_PATH_LEN });
    }
    if l == 0 {
        return Err(Error::InvalidParameter("path length must be positive".into()));
    }
    Ok(restricted_growth_strings(l).iter().map(|c| ClosedPath::from_cycle(c)).collect())
}

/// Canonical representatives of pairs `(gamma_1, gamma_2)` under simultaneous
/// relabeling: the labels of both paths share one namespace.
pub fn enumerate_path_pairs(l1: usize, l2: usize) -> Result<Vec<(ClosedPath, ClosedPath)>> {
    if l1 == 0 || l2 == 0 {
        return Err(Error::InvalidParameter("path length must be positive".into()));
    }
    if l1 + l2 > MAX_PATH_LEN {
        return Err(Error::PathTooLong { len: l1 + l2, cap: MAX_PATH_LEN });
    }
    Ok(restricted_growth_strings(l1 + l2)
        .iter()
        .map(|s| (ClosedPath::from_cycle(&s[..l1]), ClosedPath::from_cycle(&s[l1..])))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::falling_factorial;
    use std::collections::HashMap;

    fn words(paths: &[ClosedPath]) -> Vec<Vec<usize>> {
        paths.iter().map(ClosedPath::labels).collect()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(words(&enumerate_paths(1).unwrap()), vec![vec![1, 1]]);
        assert_eq!(words(&enumerate_paths(2).unwrap()), vec![vec![1, 1, 1], vec![1, 2, 1]]);
        assert_eq!(
            words(&enumerate_paths(3).unwrap()),
            vec![vec![1, 1, 1, 1], vec![1, 1, 2, 1], vec![1, 2, 1, 1], vec![1, 2, 2, 1], vec![1, 2, 3, 1]]
        );
        assert!(matches!(enumerate_paths(9), Err(Error::PathTooLong { .. })));
    }

    #[test]
    fn counts_are_bell_numbers() {
        let bell = [1usize, 2, 5, 15, 52, 203, 877, 4140];
        for l in 1..=8 {
            let paths = enumerate_paths(l).unwrap();
            assert_eq!(paths.len(), bell[l - 1]);
            assert!(paths.iter().all(ClosedPath::is_canonical));
            assert!(paths.windows(2).all(|w| w[0] < w[1]));
        }
    }

    /// Brute force over every map [0..l) -> [0..p) shows the canonical
    /// enumeration hits each orbit exactly once, with orbit size p!/(p-v)!.
    #[test]
    fn orbit_sizes_by_brute_force() {
        for p in 1..=5usize {
            for l in 1..=4usize {
                let mut orbits: HashMap<Vec<usize>, u128> = HashMap::new();
                let total = p.pow(l as u32);
                for code in 0..total {
                    let mut rest = code;
                    let cycle: Vec<usize> = (0..l)
                        .map(|_| {
                            let d = rest % p;
                            rest /= p;
                            d
                        })
                        .collect();
                    *orbits.entry(ClosedPath::from_cycle(&cycle).canonical().labels()).or_default() += 1;
                }
                let reps: Vec<ClosedPath> =
                    enumerate_paths(l).unwrap().into_iter().filter(|g| g.vertex_count() <= p).collect();
                assert_eq!(reps.len(), orbits.len());
                for g in reps {
                    assert_eq!(orbits[&g.labels()], falling_factorial(p as u64, g.vertex_count() as u64), "{g}");
                }
            }
        }
    }

    #[test]
    fn paths_per_vertex_count_below_v_to_the_l() {
        for l in 1..=7 {
            let paths = enumerate_paths(l).unwrap();
            for v in 1..=l {
                let count = paths.iter().filter(|g| g.vertex_count() == v).count();
                assert!((count as u64) < (v as u64).pow(l as u32) || (v == 1 && count == 1), "l={l} v={v}");
            }
        }
    }

    #[test]
    fn construction_and_display() {
        let g = ClosedPath::from_labels(&[1, 2, 3, 2, 1]).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.to_string(), "(1,2,3,2,1)");
        assert!(ClosedPath::from_labels(&[1, 2]).is_err());
        assert!(ClosedPath::from_labels(&[1]).is_err());
        assert!(ClosedPath::from_labels(&[0, 0]).is_err());
        let raw = ClosedPath::new(vec![4, 2, 4]).unwrap();
        assert!(!raw.is_canonical());
        assert_eq!(raw.canonical().labels(), vec![1, 2, 1]);
        assert_eq!(g.rotated(1).labels(), vec![2, 3, 2, 1, 2]);
    }

    #[test]
    fn pair_enumeration() {
        let pairs = enumerate_path_pairs(2, 2).unwrap();
        assert_eq!(pairs.len(), 15);
        let (a, b) = &pairs[pairs.len() - 1];
        assert_eq!((a.labels(), b.labels()), (vec![1, 2, 1], vec![3, 4, 3]));
    }
}
