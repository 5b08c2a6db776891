//! Dense exterior (Grassmann) algebra over an `n`-dimensional real
//! inner-product space: basis blades, wedge products, the inner products
//! induced on every exterior power by an SPD metric, and the Hodge star.
//!
//! The star is not computed against an orthonormal frame. Instead its defining
//! relation `<*v, w> mu = v ^ w` is solved directly as a linear system in the
//! Gram matrix of the standard blade basis, which keeps the construction valid
//! for any SPD metric without explicit orthonormalization.

mod blade;
mod metric;
mod multivector;
mod star;

pub use blade::{canonical_blade, BladeIndex, MAX_DIM};
pub use metric::Metric;
pub use multivector::Multivector;
pub use star::{gram_matrix, hodge_star, inner_product, norm, volume_form};
