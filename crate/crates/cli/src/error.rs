use serde_json::{json, Value};
use thiserror::Error;

use wfdecide::closure::ClosureError;
use wfdecide::covering::CoveringError;
use wfdecide::flp::FlpError;
use wfdecide::solver::SolverError;
use wfdecide::task::TaskError;

/// Failures mapped onto process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or invalid input: exit 2.
    #[error("{0}")]
    Input(String),
    /// A search or size cap was hit: exit 3, with whatever counters are known.
    #[error("{message}")]
    Resource { message: String, partial: Value },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Resource { .. } => 3,
            CliError::Io(_) | CliError::Internal(_) => 1,
        }
    }
}

fn from_solver(e: &SolverError) -> Option<CliError> {
    if !e.is_resource_limit() {
        return None;
    }
    let partial = match e {
        SolverError::ResourceLimit { stats } => json!({ "stats": stats }),
        _ => json!({}),
    };
    Some(CliError::Resource {
        message: e.to_string(),
        partial,
    })
}

impl From<TaskError> for CliError {
    fn from(e: TaskError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        from_solver(&e).unwrap_or_else(|| match e {
            SolverError::Task(t) => t.into(),
            other => CliError::Input(other.to_string()),
        })
    }
}

impl From<ClosureError> for CliError {
    fn from(e: ClosureError) -> Self {
        match e {
            ClosureError::Solver(s) => s.into(),
            ClosureError::Task(t) => t.into(),
            ClosureError::WitnessInvalid(_) | ClosureError::DimensionUnsupported { .. } => {
                CliError::Input(e.to_string())
            }
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<FlpError> for CliError {
    fn from(e: FlpError) -> Self {
        match e {
            FlpError::Closure(c) => c.into(),
            FlpError::Solver(s) => s.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<CoveringError> for CliError {
    fn from(e: CoveringError) -> Self {
        match e {
            CoveringError::Closure(c) => c.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}
