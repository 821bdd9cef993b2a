//! Nambu-Hamiltonian dynamics: symbolic vector fields, the Liouville
//! divergence identity, and fixed-step RK4 integration in `f64`.

mod integrate;
mod system;

pub use integrate::{conserved_drift, integrate, Method, Trajectory};
pub use system::{divergence, vector_field, NambuSystem};
