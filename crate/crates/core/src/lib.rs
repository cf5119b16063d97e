//! A numerical laboratory for the failure of stochastic homogenization of a
//! viscous Hamilton-Jacobi equation with a non-convex Hamiltonian.
//!
//! The crate builds a random environment of dyadic rectangles, evaluates the
//! Hamiltonian `H(p, x) = -c(x) + |p2| - |p1| + max(‖p‖∞ - 2, 0)^q`, checks an
//! explicit supersolution and its rotated subsolution, solves
//! `∂t u + H(∇u, x) - Δu = 0` with a monotone explicit scheme, and evaluates
//! the probability of the rectangle events driving the oscillation of
//! `u(T, 0) / T`.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_forms;
pub mod environment;
pub mod experiments;
pub mod geometry;
pub mod hamiltonian;
pub mod pgm;
pub mod probability;
pub mod rng;
pub mod solver;

pub use environment::{
    Background, ConstantCost, CostField, EnvError, EnvParams, Environment, Orientation, Plant, PlantSpec, Rectangle,
};
pub use geometry::{Point, Window};
