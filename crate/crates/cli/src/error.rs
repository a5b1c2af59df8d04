use fracmat_core::linalg::LinalgError;
use fracmat_core::operator::OperatorError;
use fracmat_core::oracle::OracleError;
use fracmat_core::symbolic::SymbolicError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Schema or validation failure at a field path of the TaskSpec.
    #[error("spec error at {path}: {message}")]
    Spec { path: String, message: String },
    #[error("invalid FRACMAT_TOL_SCALE {0:?}: expected a real number >= 1")]
    TolScale(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("operator: {0}")]
    Operator(OperatorError),
    #[error("symbolic: {0}")]
    Symbolic(#[from] SymbolicError),
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
    #[error("linalg: {0}")]
    Linalg(#[from] LinalgError),
}

impl From<OperatorError> for CliError {
    fn from(e: OperatorError) -> Self {
        match e {
            OperatorError::Linalg(e) => CliError::Linalg(e),
            OperatorError::Symbolic(e) => CliError::Symbolic(e),
            OperatorError::Oracle(e) => CliError::Oracle(e),
            e => CliError::Operator(e),
        }
    }
}
