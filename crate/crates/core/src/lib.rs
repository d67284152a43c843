//! Weighted finite element method for the stationary Navier-Stokes equations
//! in polygonal domains with one reentrant corner.
//!
//! The pipeline is:
//!
//! 1. [`mesh`]: build one of the benchmark domains, triangulate it with a
//!    structured generator and split every base triangle through its centroid.
//! 2. [`space`]: continuous quadratic velocity and discontinuous linear
//!    pressure degrees of freedom, with basis functions multiplied by powers of
//!    the corner weight from [`weight`].
//! 3. [`assembly`]: integrate the weighted forms into a sparse saddle-point
//!    system and apply Dirichlet data.
//! 4. [`solver`]: incomplete Uzawa iteration with ILU(0)-preconditioned GMRES
//!    for the velocity block and a lumped Schur Richardson sweep for the
//!    pressure.
//! 5. [`picard`]: outer Picard linearisation and recovery of nodal values.
//! 6. [`benchmark`]: singular exact solutions, weighted error norms and the
//!    convergence study driver.
//!
//! The crate is `no_std` and only needs `alloc`; file formats and the command
//! line live in the companion `wfem` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod assembly;
pub mod benchmark;
mod error;
pub mod geometry;
pub mod mesh;
pub mod picard;
pub mod quadrature;
pub mod solver;
pub mod space;
pub mod sparse;
pub mod weight;

pub use error::{Error, Result};
pub use geometry::Point2;
