//! Spectral toolkit for q-convex hypersurface data.
//!
//! The crate builds the operators that control harmonic p-forms on an
//! immersed hypersurface from purely pointwise data: the extension of a
//! shape operator to exterior powers, the curvature-operator contraction
//! on two-vectors, the sharp lower bound for the extrinsic term under
//! q-convexity, and a certification engine that turns those bounds into
//! per-degree Betti-number certificates. A model lab for the Clifford
//! torus family in the unit sphere provides the sharpness anchors.
//!
//! Everything is dense and desk-scale: ambient dimensions are capped at
//! [`exterior_basis::MAX_DIMENSION`] so that every spectrum can be
//! cross-checked by a dense symmetric eigensolver.

pub mod betti_engine;
pub mod convexity_bounds;
pub mod curvature_bochner;
pub mod error;
pub mod exterior_basis;
pub mod exterior_operators;
pub mod reports;
pub mod sampling;
pub mod sphere_lab;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
