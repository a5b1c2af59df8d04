//! The matrix-order differintegral `ₐD_x^A` and checks of its composition,
//! shift, inverse, transpose, determinant and trace laws.

mod build;
mod compose;
mod laws;
mod values;

pub use build::{build_operator, MatrixOrderOperator, Realization};
pub use compose::{
    compose_apply, compose_projector_expansion, compose_similarity_expansion, shift_by_integer,
};
pub use laws::{
    additivity_check, determinant_sequential, expansion_check, inverse_pair_check, jordan_fd_check,
    shift_check, standard_grid, trace_law_check, transpose_check, Comparison, LawCheck,
    EXPANSION_TOL, FD_ORDER_STEP, INVERSE_PAIR_TOL, JORDAN_FD_TOL, TRANSPOSE_TOL,
};
pub use values::{MatrixExprFunction, VectorExprFunction};

use crate::linalg::LinalgError;
use crate::oracle::OracleError;
use crate::symbolic::SymbolicError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OperatorError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("Jordan segment of size {size} needs order-derivatives beyond 3")]
    JordanDepth { size: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("base points differ: {left} vs {right}")]
    BasePointMismatch { left: f64, right: f64 },
    #[error("operation needs a diagonalizable order matrix")]
    NotDiagonalizable,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

#[cfg(test)]
mod tests;
