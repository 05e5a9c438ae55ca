//! Solver and verification toolkit for the iterative differential equation
//! `-k * g'(x) = g^{-1}(x)` on the unit interval.
//!
//! The equation has exactly one solution, reached as the global limit of a
//! reflect-and-integrate operator T acting on decreasing grid functions. This
//! crate computes that solution, brackets its area
//! `kappa = 0.278877...` rigorously from the iteration trace, and checks the
//! structural properties the construction relies on (domination, crossing
//! counts, stride/area inequalities, metric equivalence, global convergence).

pub mod crossing;
mod error;
pub mod fixtures;
mod grid;
pub mod ops;
pub mod solve;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{
    default_scale_grid, log_symmetric_axis, uniform_knots, ClassReport, GridFunction, Tolerances,
    DEFAULT_EPS_MONO,
};
