//! Numerical laboratory for linear and nonlinear Schrödinger evolution on
//! H-type groups ℍ^d_p.
//!
//! The crate is organized frequency-first: data lives as coefficients on the
//! joint spectrum (2m + d)|λ| of the sublaplacian, where every operator used
//! by the experiments (propagator, heat flow, fractional powers, dyadic band
//! projections) is an exact diagonal multiplier. Physical space is visited
//! only for sup-norms, mixed-norm quadrature, and pointwise nonlinearities.

pub mod calculus;
pub mod dispersive;

pub mod error;
pub mod euclid;
pub mod field;
pub mod grid;
pub mod group;
pub mod io;
pub mod nls;
pub mod special;
pub mod strichartz;

pub use error::{Error, Result};
