//! Exterior calculus over named coordinates and the closed-form conditions
//! built on it: the three-form `Ω` of the volume-preserving hierarchy,
//! Plebanski pencils, Gindikin rank checks, the cubic frame metric and
//! hydrodynamic Lax compatibility.

mod form;
mod hydro;
mod metric;
mod omega;
mod pencil;
mod plebanski;

pub use form::DifferentialForm;
pub use hydro::{hydro_compat_residual, Grid, HydroResidual, Solution};
pub use metric::{det_metric3, SymmetricForm};
pub use omega::{krichever_closedness, omega3_check, omega3_form, Omega3Residuals};
pub use pencil::{gindikin_check, FormPencil, GindikinReport};
pub use plebanski::{
    plebanski_pencil, plebanski_pencil_form, plebanski_residual, plebanski_table, PencilResiduals,
    PLEBANSKI_COORDS,
};
