use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] brody_core::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown corpus id {0:?}")]
    UnknownCurve(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0} acceptance criteria failed")]
    AcceptanceFailed(usize),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    /// 0 success, 1 other failures, 2 bad input or violated precondition,
    /// 3 numerical non-convergence, 4 violated bound.
    pub fn exit_code(&self) -> i32 {
        use brody_core::Error as E;
        match self {
            CliError::Core(E::QuadratureNonConvergent { .. }) => 3,
            CliError::Core(E::BoundViolated(_)) => 4,
            CliError::Core(_) | CliError::Parse(_) | CliError::UnknownCurve(_) => 2,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) | CliError::AcceptanceFailed(_) => 1,
        }
    }
}
