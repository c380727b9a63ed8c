//! Exact rational linear algebra, linear programming and simplex covers.

pub mod cover;
pub mod lp;
pub mod matrix;

pub use cover::{
    affinely_independent, compute_cover, newton_vertices, reduce_to_affinely_independent,
    CircuitCover, Cover, CoverError,
};
pub use lp::{solve_lp_exact, Bound, LinearProgram, LpError, LpOutcome, Relation};
pub use matrix::{pseudo_inverse_exact, RationalMatrix};
