//! Least-time crossing of a straight interface between two media whose
//! admissible velocities form convex sets.
//!
//! A traveller goes from `x0` below the x-axis to `x1` above it, using
//! velocities from `F0` in the lower half-plane and from `F1` in the upper
//! one. [`solver::solve`] finds the crossing abscissa by bisection on a
//! generalized Snell residual; [`oracle`] re-derives the answer by direct
//! minimization; [`cli`] drives both from problem files.

pub mod cli;
pub mod geometry;
pub mod oracle;
pub mod solver;

pub use geometry::{GeometryError, NormalFace, SetSpec, Vec2, VelocitySet};
pub use solver::{solve, ElvisProblem, SolveResult, Status, Termination};
