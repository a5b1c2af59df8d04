//! Dense complex linear algebra for small square matrices: eigenvalues,
//! spectral projectors, Jordan chains and matrix functions.

mod eigen;
mod function;
mod jordan;
mod matrix;
mod spectral;
mod svd;

pub use eigen::{eigen_decompose, eigenvalues, ClusterKind, EigenCluster, EigenDecomposition};
pub use function::{
    function_by_jordan, function_by_projectors, function_by_similarity, matrix_function,
    segment_function, FunctionWithDerivatives,
};
pub use jordan::{jordan_decompose, JordanData, JordanSegment};
pub use matrix::{CMatrix, Lu};
pub use spectral::{
    classify, frobenius_covariants, spectral_projectors, Classification, MatrixClass,
    ProjectorResiduals, SpectralData,
};
pub use svd::{svd, Svd};

use crate::scalar::ComplexScalar;

pub const MAX_EIGEN_DIM: usize = 32;
pub const MAX_JORDAN_DIM: usize = 8;
/// Eigenvalues closer than this times `‖A‖_F` count as one.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Default normality tolerance for [`classify`].
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default rank threshold for [`jordan_decompose`].
pub const JORDAN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is singular")]
    Singular,
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("dimension {n} exceeds the supported maximum {max}")]
    TooLarge { n: usize, max: usize },
    #[error("matrix is defective (no eigenvector basis)")]
    Defective,
    #[error("distinct eigenvalues {0:?} lie within the clustering radius")]
    EigenvalueCluster(Vec<ComplexScalar>),
    #[error("ambiguous Jordan structure: {0}")]
    AmbiguousStructure(String),
    #[error("derivative of order {needed} required, only {available} available")]
    DerivativeUnavailable { needed: usize, available: usize },
    #[error("derivative {derivative} of the function is undefined at {at}")]
    FunctionUndefined {
        at: ComplexScalar,
        derivative: usize,
    },
    #[error("matrix function paths disagree by {gap:.3e} (budget {budget:.3e})")]
    PathDisagreement { gap: f64, budget: f64 },
}
