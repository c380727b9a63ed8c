//! Floating-point conic optimization over products of the zero cone, the
//! nonnegative orthant and exponential cones.

pub mod expcone;
mod ipm;
pub mod models;
mod program;

pub use ipm::{solve_expcone, FailureReason, NumericSolution, SolverFailure};
pub use program::{
    primal_violation, Affine, ExpConeProgram, LinearForm, DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE,
};
