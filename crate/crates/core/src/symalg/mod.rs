//! Exact symbolic kernel.
//!
//! [`MultiPoly`] is a sparse polynomial over an ordered [`VariableTable`];
//! the table also carries jet symbols `u^(j)` so the dispersionless
//! hierarchies can be written as differential-polynomial identities.
//! [`LaurentObject`] layers a truncated Laurent expansion in the spectral
//! parameter on top, tracking which coefficients are still exact.

mod laurent;
mod parse;
mod poly;
pub(crate) mod scalar;
mod vars;

pub mod json;

pub use laurent::LaurentObject;
pub use parse::parse_poly;
pub use poly::{CompiledPoly, Monomial, MultiPoly};
pub use scalar::{format_scalar, parse_scalar, ExactScalar};
pub use vars::{VarKind, Variable, VariableTable};
