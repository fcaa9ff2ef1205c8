use ocs_core::exact::ExactError;
use ocs_core::mc::McError;
use ocs_core::ParamError;

/// Failure of a command, carrying its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("invalid arguments: {0}")]
    Invalid(String),
    #[error("infeasible hypotheses: {0}")]
    Infeasible(String),
    #[error("violation found: {0}")]
    Violation(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl LabError {
    /// 0 success, 1 violation (or I/O failure), 2 invalid arguments,
    /// 3 infeasible hypotheses.
    pub fn exit_code(&self) -> u8 {
        match self {
            LabError::Invalid(_) => 2,
            LabError::Infeasible(_) => 3,
            LabError::Violation(_) | LabError::Io(_) | LabError::Json(_) | LabError::Csv(_) => 1,
        }
    }
}

impl From<ParamError> for LabError {
    fn from(e: ParamError) -> Self {
        LabError::Invalid(e.to_string())
    }
}

impl From<McError> for LabError {
    fn from(e: McError) -> Self {
        match e {
            McError::Infeasible { profile, hypothesis } => LabError::Infeasible(format!("profile {profile}: {hypothesis}")),
            McError::Param(_) | McError::Precondition(_) => LabError::Invalid(e.to_string()),
        }
    }
}

impl From<ExactError> for LabError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::TooLarge { .. } | ExactError::NeedsAllowLarge { .. } => LabError::Invalid(e.to_string()),
            ExactError::HorizonExhausted { .. } => LabError::Violation(e.to_string()),
        }
    }
}
