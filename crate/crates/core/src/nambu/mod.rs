//! n-ary Nambu brackets and Nambu tensors.
//!
//! The Jacobian bracket `{f1,…,fn} = det(∂f_i/∂x_j)` over a [`BracketSpace`]
//! is the concrete realization; [`NambuTensor`] is the polyvector form
//! `η(df1,…,dfn)`. The algebraic and differential constraint residuals are
//! the component form of the fundamental identity, and
//! [`is_decomposable_oracle`] decides decomposability independently by the
//! interior-product criterion.

mod bracket;
mod constraints;
mod plucker;
pub(crate) mod tensor;

pub use bracket::{det, fundamental_identity_residual, nambu_bracket, BracketSpace};
pub use constraints::{
    algebraic_constraint_residual, differential_constraint_residual, plucker_s,
    satisfies_algebraic_constraint, IndexPair,
};
pub use plucker::is_decomposable_oracle;
pub use tensor::{tensor_bracket, NambuTensor};
