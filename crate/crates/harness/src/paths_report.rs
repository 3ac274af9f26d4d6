//! Enumeration report: every canonical path of one length with its
//! reduction, double-tree membership and exact weight.

use mub_core::combinat::narayana;
use mub_core::mub::MubFamily;
use mub_core::paths::{enumerate_paths, reduce, w_exact, WClass, MAX_PATH_LEN};

use crate::error::{HarnessError, Result};
use crate::report::{fmt_opt, Check};

/// Longest path for which exact weights are computed.
pub const WEIGHT_MAX_LEN: usize = 4;
/// Constant in the non-member bound `K n^{1-v} (1/m + 1/n)`.
pub const BOUND_CONSTANT: f64 = 4.0;

#[derive(Clone, Debug, PartialEq)]
pub struct PathRow {
    pub word: String,
    pub l: usize,
    pub v: usize,
    pub in_gamma: bool,
    pub repeats: usize,
    pub singletons: usize,
    pub w_exact: Option<(f64, f64)>,
    /// `n^{1-v}` for members.
    pub predicted: Option<f64>,
    /// `K n^{1-v} (1/m + 1/n)` for non-members.
    pub bound: Option<f64>,
    pub within_bound: Option<bool>,
}

impl PathRow {
    pub const HEADER: [&'static str; 11] =
        ["word", "l", "v", "in_gamma", "u", "w", "w_exact_re", "w_exact_im", "predicted", "bound", "within_bound"];

    pub fn record(&self) -> Vec<String> {
        vec![
            self.word.clone(),
            self.l.to_string(),
            self.v.to_string(),
            self.in_gamma.to_string(),
            self.repeats.to_string(),
            self.singletons.to_string(),
            fmt_opt(self.w_exact.map(|w| w.0)),
            fmt_opt(self.w_exact.map(|w| w.1)),
            fmt_opt(self.predicted),
            fmt_opt(self.bound),
            self.within_bound.map(|b| b.to_string()).unwrap_or_default(),
        ]
    }
}

pub struct PathReport {
    pub rows: Vec<PathRow>,
    pub checks: Vec<Check>,
    /// Largest `|W| / (n^{1-v} (1/m + 1/n))` over non-members with weights.
    pub observed_constant: Option<f64>,
}

pub fn path_report(length: usize, fam: &MubFamily) -> Result<PathReport> {
    if length == 0 || length > MAX_PATH_LEN {
        return Err(HarnessError::Config(format!("path length {length} outside 1..={MAX_PATH_LEN}")));
    }
    let n = fam.dimension() as f64;
    let m = fam.basis_count() as f64;
    let mut rows = Vec::new();
    let mut member_dev = 0.0f64;
    let mut observed: Option<f64> = None;
    for g in enumerate_paths(length)? {
        let trace = reduce(&g);
        let v = g.vertex_count();
        let member = trace.ends_in_loop();
        let base = n.powi(1 - v as i32);
        let weight = if length <= WEIGHT_MAX_LEN {
            match w_exact(&g, fam) {
                Ok(w) => Some(w),
                Err(mub_core::Error::CostGuard { .. }) => None,
                Err(e) => return Err(e.into()),
            }
        } else {
            None
        };
        let (predicted, bound) = if member {
            (Some(base), None)
        } else {
            (None, Some(BOUND_CONSTANT * base * (1.0 / m + 1.0 / n)))
        };
        let within_bound = weight.map(|w| match w.class {
            WClass::GammaMember { predicted } => {
                let dev = (w.value - predicted).norm();
                member_dev = member_dev.max(dev);
                dev <= 1e-10
            }
            WClass::NonMember { bound: unit } => {
                let k = w.value.norm() / unit;
                observed = Some(observed.map_or(k, |o: f64| o.max(k)));
                k <= BOUND_CONSTANT
            }
        });
        rows.push(PathRow {
            word: g.to_string(),
            l: length,
            v,
            in_gamma: member,
            repeats: trace.repeats,
            singletons: trace.singletons,
            w_exact: weight.map(|w| (w.value.re, w.value.im)),
            predicted,
            bound,
            within_bound,
        });
    }

    let mut checks = Vec::new();
    for v in 1..=length {
        let count = rows.iter().filter(|r| r.v == v && r.in_gamma).count() as f64;
        let expected = narayana(length as u64, v as u64) as f64;
        checks.push(Check::at_most(format!("narayana_v{v}"), (count - expected).abs(), 0.0));
    }
    if rows.iter().any(|r| r.w_exact.is_some()) {
        checks.push(Check::at_most("member_weight_defect", member_dev, 1e-10));
        if let Some(k) = observed {
            checks.push(Check::at_most("nonmember_constant", k, BOUND_CONSTANT));
        }
    }
    Ok(PathReport { rows, checks, observed_constant: observed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mub_core::mub::construct_complete_mubs;

    #[test]
    fn length_three_rows() {
        let fam = construct_complete_mubs(3).unwrap();
        let r = path_report(3, &fam).unwrap();
        assert_eq!(r.rows.len(), 5);
        let members: Vec<usize> = (1..=3).map(|v| r.rows.iter().filter(|x| x.v == v && x.in_gamma).count()).collect();
        assert_eq!(members, vec![1, 3, 1]);
        assert!(r.checks.iter().all(|c| c.pass));
    }

    #[test]
    fn length_two_weight() {
        let fam = construct_complete_mubs(3).unwrap();
        let r = path_report(2, &fam).unwrap();
        let row = r.rows.iter().find(|x| x.word == "(1,2,1)").unwrap();
        assert!((row.w_exact.unwrap().0 - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(row.record().len(), PathRow::HEADER.len());
    }

    #[test]
    fn too_long() {
        let fam = construct_complete_mubs(3).unwrap();
        assert!(path_report(9, &fam).is_err());
        let r = path_report(6, &fam).unwrap();
        assert!(r.rows.iter().all(|x| x.w_exact.is_none()));
    }
}
