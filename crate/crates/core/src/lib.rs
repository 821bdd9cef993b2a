//! Exact toolkit for Nambu-Poisson mechanics and the volume-preserving
//! dispersionless hierarchies built on it.
//!
//! Everything symbolic runs over arbitrary-precision rationals, so an
//! identity "holds" exactly when its residual is the zero polynomial.
//! Numerical integration lives in [`flows`] and is the only place floating
//! point appears.
//!
//! Module map:
//! - [`symalg`]: rationals, multivariate polynomials, jet variables, and
//!   truncated Laurent series in the spectral parameter.
//! - [`nambu`]: Jacobian brackets, the fundamental identity, Nambu tensors
//!   and decomposability.
//! - [`flows`]: Nambu-Hamiltonian vector fields, divergence, RK4.
//! - [`hierarchy`]: dispersionless KP in jet variables and the three-flow
//!   volume-preserving hierarchy.
//! - [`forms`]: exterior calculus, heavenly-equation pencils, Gindikin
//!   checks, the determinant metric and hydrodynamic compatibility.

pub mod error;
pub mod flows;
pub mod forms;
pub mod hierarchy;
pub mod nambu;
pub mod sample;
pub mod symalg;

pub use error::{Error, Result};
