//! Exact scalars, dense matrices, Kronecker products and Gaussian elimination.

mod basis;
mod matrix;
pub mod prime;
mod scalar;

pub use basis::{express_in_basis, solve_row_equation, RowBasis};
pub use matrix::{dot, kron, kron_all, kron_rows_times, vec_mat, Matrix};
pub use scalar::{Field, Scalar};

pub(crate) use scalar::{add_mod, mul_mod, reduce_bigint};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unknown field `{0}` (expected `q` or `fp:<prime>`)")]
    BadField(String),
    #[error("malformed scalar `{0}`")]
    BadScalar(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("row {0} is linearly dependent on the previous rows")]
    NotFullRowRank(usize),
    #[error("target row {0} is not in the row space")]
    NotInRowSpace(usize),
}
