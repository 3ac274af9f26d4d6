//! Closed paths, their reduction, and exact path weights.

pub mod path;
pub mod reduce;
pub mod weights;

pub use path::{enumerate_path_pairs, enumerate_paths, ClosedPath, MAX_PATH_LEN};
pub use reduce::{gamma_count, in_gamma, is_reduced, reduce, reduce_with, ReductionCase, ReductionOrder, ReductionStep, ReductionTrace};
pub use weights::{
    assignment_stats, classify, expectation_exact, join, omega, sample_map_moments, variance_exact, w_exact,
    w_pair_exact, AssignmentStats, PathAssignment, WClass, WValue,
};
