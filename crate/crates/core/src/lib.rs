//! Numerical laboratory for planar domains swept by the outward normal rays
//! of a convex core `C`: Dirichlet and coupled biharmonic solves on Cartesian
//! grids, level-set geometry, isoperimetric inequalities, Bernoulli data,
//! convergence of domain sequences, and the boundary measures `τ_Ω`, `γ(Ω)`.

pub mod analysis;
pub mod cli;
pub mod convergence;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod parallel;
pub mod levelsets;
pub mod solver;

pub use error::{GnpError, Result};
