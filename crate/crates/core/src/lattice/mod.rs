//! Exact integer and ℚ(√d) linear algebra over ℤᴺ.

mod cfrac;
mod matrix;
mod scalar;
mod subgroup;

pub use cfrac::SqrtConvergents;
pub use matrix::{ext_gcd, hnf, integer_kernel, snf_invariants, Hnf, IntMatrix, IntVector};
pub use scalar::{is_squarefree, Scalar, ScalarFunctional, Sign};
pub use subgroup::{
    extend_basis, extend_columns, functional_kernel, impurity_witness, is_pure, is_unimodular,
    kernel_split, pure_closure, Subgroup,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("subgroup is not pure in the enclosing group")]
    NotPure,
    #[error("subgroup is not contained in the enclosing group")]
    NotContained,
    #[error("functional vanishes on the whole subgroup")]
    ZeroOnSubgroup,
    #[error("kernel of the functional does not have codimension 1")]
    KernelNotCodimOne,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("radicand {0} is not a squarefree positive integer")]
    InvalidRadicand(u64),
    #[error("coefficients mix Q(sqrt {0}) and Q(sqrt {1})")]
    FieldMismatch(u64, u64),
}
