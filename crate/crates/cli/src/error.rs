use polysmith::{IdealError, MatrixError, PolyError, ReduceError, ResidueError};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_NOT_EQUIVALENT: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;
pub const EXIT_HYPOTHESIS: i32 = 66;
pub const EXIT_BUDGET: i32 = 70;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Hypothesis(_) => EXIT_HYPOTHESIS,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<ResidueError> for CliError {
    fn from(e: ResidueError) -> Self {
        match e {
            ResidueError::Poly(p) => p.into(),
            other => CliError::Hypothesis(format!("modulus: {other}")),
        }
    }
}

impl From<IdealError> for CliError {
    fn from(e: IdealError) -> Self {
        match e {
            IdealError::BudgetExceeded(s) => CliError::Budget(s),
            IdealError::Poly(p) => p.into(),
            other => CliError::Hypothesis(other.to_string()),
        }
    }
}

impl From<MatrixError> for CliError {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::Poly(p) => p.into(),
            MatrixError::Ideal(i) => i.into(),
            MatrixError::ShapeMismatch(s) => CliError::Usage(s),
            other => CliError::Hypothesis(other.to_string()),
        }
    }
}

impl From<ReduceError> for CliError {
    fn from(e: ReduceError) -> Self {
        if e.is_budget() {
            return CliError::Budget(e.to_string());
        }
        match e {
            ReduceError::Matrix(m) => m.into(),
            ReduceError::Residue(r) => r.into(),
            ReduceError::HypothesisViolated(s) => CliError::Hypothesis(s),
            other => CliError::Hypothesis(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}
