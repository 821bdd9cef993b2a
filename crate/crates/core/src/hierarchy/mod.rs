//! Dispersionless KP in a jet ring and the volume-preserving three-flow
//! hierarchy on `(λ, p, q)`, with exact residual checks.
//!
//! All residuals are [`LaurentObject`](crate::symalg::LaurentObject)s: a
//! coefficient below the truncation floor is indeterminate, never zero.

mod dkp;
mod report;
mod vp;

pub use dkp::{dkp_flow, orlov_m, poisson2, zero_curvature_residual, DkpState, OrlovData};
pub use report::{CoefficientEntry, ResidualReport, Verdict, Window};
pub use vp::{
    cross_flow_residual, nambu3, shift_time, vacuum_solution, volume_constraint_residual,
    vp_flow_residual, vp_table, VpTriple,
};
