//! Exact MILP solving: LP relaxation via bounded-variable two-phase revised
//! simplex, branch-and-bound on the integer variables, and MPS export for
//! cross-checks against external solvers.

mod bnb;
mod lp;
mod mps;

pub use bnb::{solve_milp, MilpSolution, MilpStatus, SolveLimits};
pub use lp::{solve_lp, BasisSnapshot, LpSolution, LpStatus, Simplex};
pub use mps::{export_mps, MpsExport};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid problem: {0}")]
    Problem(#[from] crate::milp::ProblemError),
    #[error("basis matrix is singular")]
    SingularBasis,
    #[error("iteration limit exceeded after {0} simplex pivots")]
    IterationLimit(u64),
    #[error("numerical failure: {0}")]
    Numerical(String),
}
