//! Reduction of closed paths and the double-tree class.
//!
//! Two moves shorten a path without changing its weight beyond a known factor:
//!
//! * a *repeat* removes one of two cyclically consecutive equal vertices
//!   (the inner product of a unit vector with itself is 1);
//! * a *singleton* splice removes a vertex visited exactly once, joining its
//!   neighbours (summing over an orthonormal basis contributes a factor 1/n
//!   to the weight).
//!
//! A path is reduced when neither move applies, or when it is the single
//! loop of length 1. Paths that reduce to the single loop are double trees.

use serde::Serialize;

use crate::combinat::narayana;
use crate::error::{Error, Result};
use crate::paths::path::{enumerate_paths, ClosedPath, MAX_PATH_LEN};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReductionCase {
    /// Case 1: `gamma(u) == gamma(u + 1)`.
    Repeat,
    /// Case 2: the vertex at `u` is visited once.
    Singleton,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub case: ReductionCase,
    /// Cycle position removed from `before`.
    pub position: usize,
    pub before: ClosedPath,
    /// Keeps the labels of `before`, so assignments carry over unchanged.
    pub after: ClosedPath,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub input: ClosedPath,
    pub steps: Vec<ReductionStep>,
    /// Number of repeat (Case 1) steps.
    pub repeats: usize,
    /// Number of singleton (Case 2) steps.
    pub singletons: usize,
    /// Canonical form of the final path.
    pub reduced: ClosedPath,
}

impl ReductionTrace {
    pub fn ends_in_loop(&self) -> bool {
        self.reduced.len() == 1
    }
}

/// Which applicable move to take next.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReductionOrder {
    /// Smallest cycle position; a repeat wins ties.
    #[default]
    FirstPosition,
    /// Largest cycle position; a singleton wins ties.
    LastPosition,
}

fn occurrences(cycle: &[usize], x: usize) -> usize {
    cycle.iter().filter(|&&y| y == x).count()
}

fn applicable(cycle: &[usize], i: usize) -> (bool, bool) {
    let l = cycle.len();
    if l < 2 {
        return (false, false);
    }
    let repeat = cycle[i] == cycle[(i + 1) % l];
    let singleton = occurrences(cycle, cycle[i]) == 1;
    (repeat, singleton)
}

fn next_move(cycle: &[usize], order: ReductionOrder) -> Option<(ReductionCase, usize)> {
    let pick = |i: usize, prefer_repeat: bool| match applicable(cycle, i) {
        (true, true) if prefer_repeat => Some((ReductionCase::Repeat, i)),
        (true, true) => Some((ReductionCase::Singleton, i)),
        (true, false) => Some((ReductionCase::Repeat, i)),
        (false, true) => Some((ReductionCase::Singleton, i)),
        (false, false) => None,
    };
    match order {
        ReductionOrder::FirstPosition => (0..cycle.len()).find_map(|i| pick(i, true)),
        ReductionOrder::LastPosition => (0..cycle.len()).rev().find_map(|i| pick(i, false)),
    }
}

/// Reduced in the sense above, reading consecutive positions cyclically.
pub fn is_reduced(path: &ClosedPath) -> bool {
    let cycle = path.cycle();
    if cycle.len() == 1 {
        return true;
    }
    path.vertex_count() >= 2 && next_move(cycle, ReductionOrder::FirstPosition).is_none()
}

pub fn reduce(path: &ClosedPath) -> ReductionTrace {
    reduce_with(path, ReductionOrder::default())
}

pub fn reduce_with(path: &ClosedPath, order: ReductionOrder) -> ReductionTrace {
    let mut current = path.clone();
    let mut steps = Vec::new();
    let (mut repeats, mut singletons) = (0, 0);
    while let Some((case, position)) = next_move(current.cycle(), order) {
        let mut cycle = current.cycle().to_vec();
        cycle.remove(position);
        let after = ClosedPath::from_cycle(&cycle);
        match case {
            ReductionCase::Repeat => repeats += 1,
            ReductionCase::Singleton => singletons += 1,
        }
        steps.push(ReductionStep { case, position, before: current, after: after.clone() });
        current = after;
    }
    ReductionTrace { input: path.clone(), steps, repeats, singletons, reduced: current.canonical() }
}

/// Membership in the double-tree class: the path reduces to the single loop.
pub fn in_gamma(path: &ClosedPath) -> bool {
    reduce(path).ends_in_loop()
}

/// Number of canonical length-`l` double trees with `v` vertices.
pub fn gamma_count(l: usize, v: usize) -> Result<u128> {
    if l > MAX_PATH_LEN {
        return Err(Error::PathTooLong { len: l, cap: MAX_PATH_LEN });
    }
    if v == 0 || v > l {
        return Err(Error::InvalidParameter(format!("vertex count {v} outside 1..={l}")));
    }
    let count = enumerate_paths(l)?
        .iter()
        .filter(|g| g.vertex_count() == v && in_gamma(g))
        .count() as u128;
    debug_assert_eq!(count, narayana(l as u64, v as u64));
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(labels: &[usize]) -> ClosedPath {
        ClosedPath::from_labels(labels).unwrap()
    }

    #[test]
    fn single_edge_path() {
        let t = reduce(&path(&[1, 2, 1]));
        assert_eq!((t.repeats, t.singletons), (0, 1));
        assert_eq!(t.reduced.labels(), vec![1, 1]);
        assert!(t.ends_in_loop());
    }

    #[test]
    fn star_path_reduces_to_loop() {
        let t = reduce(&path(&[1, 2, 3, 2, 1]));
        assert_eq!(t.singletons, 2);
        assert_eq!(t.reduced.len(), 1);
        assert_eq!(t.reduced.vertex_count(), 1);
        assert_eq!(t.reduced.len(), 4 - t.repeats - t.singletons);
        assert_eq!(t.steps[0].case, ReductionCase::Singleton);
        assert_eq!(t.steps[0].position, 0);
    }

    #[test]
    fn doubled_edge_is_already_reduced() {
        let g = path(&[1, 2, 1, 2, 1]);
        assert!(is_reduced(&g));
        let t = reduce(&g);
        assert!(t.steps.is_empty());
        assert_eq!(t.reduced, g);
        assert!(!in_gamma(&g));
    }

    #[test]
    fn reduced_paths_satisfy_definition() {
        for l in 1..=7 {
            for g in enumerate_paths(l).unwrap() {
                let t = reduce(&g);
                let r = &t.reduced;
                assert_eq!(r.len(), g.len() - t.repeats - t.singletons);
                assert_eq!(r.vertex_count(), g.vertex_count() - t.singletons);
                assert!(is_reduced(r), "{g} -> {r}");
                if r.len() > 1 {
                    let c = r.cycle();
                    assert!(r.vertex_count() >= 2);
                    for (i, &x) in c.iter().enumerate() {
                        assert!(c.iter().filter(|&&y| y == x).count() >= 2);
                        assert_ne!(x, c[(i + 1) % c.len()]);
                    }
                    assert!(r.len() >= 2 * r.vertex_count());
                }
            }
        }
    }

    #[test]
    fn membership_is_order_independent() {
        for l in 1..=5 {
            for g in enumerate_paths(l).unwrap() {
                let a = reduce_with(&g, ReductionOrder::FirstPosition);
                let b = reduce_with(&g, ReductionOrder::LastPosition);
                assert_eq!(a.ends_in_loop(), b.ends_in_loop(), "{g}");
                assert_eq!(a.singletons, b.singletons, "{g}");
                assert_eq!(a.reduced.len(), b.reduced.len(), "{g}");
            }
        }
    }

    #[test]
    fn gamma_counts_are_narayana() {
        assert_eq!(gamma_count(2, 2).unwrap(), 1);
        assert_eq!(gamma_count(3, 2).unwrap(), 3);
        assert_eq!((1..=4).map(|v| gamma_count(4, v).unwrap()).sum::<u128>(), 14);
        let members: Vec<_> = enumerate_paths(3).unwrap().into_iter().filter(in_gamma).collect();
        assert_eq!(members.len(), 5);
        assert!(gamma_count(9, 2).is_err());
        assert!(gamma_count(3, 4).is_err());
    }
}
