//! Coordinate-free linear and affine hyperplane intersection over inner-product
//! spaces, with an exterior-algebra core (wedge products, metric-induced inner
//! products, Hodge star) and an applied layer that synthesizes vector fields
//! conserving or dissipating prescribed scalar quantities.
//!
//! The crate is organized bottom-up:
//!
//! - [`exterior`]: dense Grassmann algebra over `R^n` (`n <= 16`), inner
//!   products on every exterior power, and the Hodge star defined by its
//!   duality relation against an arbitrary SPD metric.
//! - [`intersect`]: explicit bases for intersections of linear and affine
//!   hyperplanes, built from star formulas rather than row reduction.
//! - [`riemann`]: the pointwise solver lifted to charts with position-dependent
//!   metrics; polynomial scalar fields, Riemannian gradients, and local
//!   generator sets of the resulting affine distributions.
//! - [`dynamics`]: synthesis of dynamical systems that conserve quantities
//!   `I_i` and dissipate quantities `D_j` at prescribed rates `h_j`, an RK4
//!   harness, and a drift/dissipation-budget audit.
//! - [`cli`]: configuration parsing, built-in scenarios, and the `solve`,
//!   `generators`, `integrate`, `check` subcommands.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod exterior;
pub mod intersect;
pub(crate) mod linalg;
pub mod riemann;

pub use dynamics::{
    audit, integrate, integrate_partial, perturb, synthesize, DriftReport, Scenario, Trajectory,
};
pub use error::{Error, Result};
pub use exterior::{
    canonical_blade, gram_matrix, hodge_star, inner_product, norm, volume_form, BladeIndex, Metric,
    Multivector,
};
pub use intersect::{
    complete_to_basis, homogeneous_basis, homogeneous_basis_with, particular_solution,
    solve_intersection, verify_solution, AffineSolution, HyperplaneSystem, VerifyReport,
};
pub use riemann::{
    frame_completion_field, generator_set, pointwise_generators, riemannian_gradient, GeneratorSet,
    MetricField, ScalarField, VectorFieldHandle,
};
