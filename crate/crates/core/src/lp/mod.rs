//! The linear program bounding noisy mutual information and its solver.

pub mod program;
pub mod simplex;

pub use program::{
    build_lp, check_symmetric_dominance, feasible_from_function, solve_lp, solve_lp_with, DominanceReport,
    FunctionSolution, LpProblem, LpSolution,
};
pub use simplex::Status;
