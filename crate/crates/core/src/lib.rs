//! Simulation of Liouville Brownian motion building blocks on a planar grid.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`kernels`] evaluates the massive Green function, its band decomposition
//!    and the Brownian resolvent kernel, each both by adaptive quadrature of
//!    the defining integrals and by closed forms that are gated against the
//!    quadrature route.
//! 2. [`gmc`] samples the band fields as stationary Gaussian fields on a
//!    periodic grid (circulant embedding), accumulates the regularized field
//!    and exponentiates it into a multiplicative chaos measure.
//! 3. [`potential`] computes log-potentials, resolvent potentials, the
//!    logarithmic bound envelope and finite-energy double integrals of a
//!    chaos measure.
//! 4. [`pcaf`] integrates the chaos density along planar Brownian paths into
//!    a positive continuous additive functional, inverts it and produces the
//!    time-changed path.
//!
//! All randomness is derived from a single master seed; outputs are
//! bit-identical across runs and across thread counts. The `parallel` feature
//! (default) switches the data-parallel inner loops to rayon; disabling it
//! yields a sequential build with identical outputs.

pub mod bessel;
pub mod error;
pub mod exec;
pub mod gmc;
pub mod grid;
pub mod io;
pub mod kernels;
pub mod pcaf;
pub mod potential;
pub mod quad;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use gmc::{ChaosMeasure, FieldStack, Gamma};
pub use grid::{CellSet, GridSpec, ScalarGrid};
pub use kernels::{CutoffSequence, KernelConfig};
