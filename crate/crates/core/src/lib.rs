//! Bi-level, multi-fidelity, multi-objective design-optimization toolkit for
//! a manta-inspired underwater glider.
//!
//! The crate is organized around the stages of the workflow:
//!
//! * [`geometry`] — 32-parameter sectional shell, lofted surface mesh,
//!   enclosed volume;
//! * [`hydro`] — coarse/fine vortex-lattice polars with a flat-plate viscous
//!   correction, glide closure, and an external-solver adapter;
//! * [`sizing`] — lower-level pressure-hull sizing by deterministic particle
//!   swarm with pattern-search refinement;
//! * [`reduction`] — physics-driven dimensionality reduction of the design
//!   space with analytic back-mapping;
//! * [`surrogate`] — stochastic RBF regression with two-fidelity additive
//!   composition and ensemble uncertainty;
//! * [`optimizer`] — batch multi-objective Bayesian optimization with
//!   expected hypervolume improvement and fidelity allocation;
//! * [`cli`] — configuration layer and the subcommand entry points used by
//!   the `mantaray` binary.
//!
//! All numerical kernels are generic over the scalar type via
//! [`scalar::Real`]; the aliases below pin the `f64` instantiations used by
//! the pipeline.

pub mod error;
pub mod linalg;
pub mod sampling;
pub mod scalar;

pub mod geometry;
pub mod hydro;
pub mod reduction;
pub mod sizing;
pub mod surrogate;

pub mod optimizer;
pub mod pipeline;

pub mod cli;
pub mod config;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` instantiations used by the shipped pipeline.
pub type Vec3 = linalg::Vec3<f64>;
pub type Matrix = linalg::Matrix<f64>;
pub type FullDesignVector = geometry::FullDesignVector<f64>;
pub type SectionParams = geometry::SectionParams<f64>;
pub type SurfaceMesh = geometry::SurfaceMesh<f64>;













