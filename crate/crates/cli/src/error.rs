use std::fmt;
use std::path::Path;

use cayley_nzflow::constructions::ConstructionError;
use cayley_nzflow::flow::FlowError;
use cayley_nzflow::graph::GraphError;
use cayley_nzflow::group::GroupError;
use cayley_nzflow::pseudoforest::PseudoforestError;
use serde_json::json;

/// An error reported as `{"error": {code, message}}` on stderr, exit code 2.
#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    pub fn parameter(message: impl Into<String>) -> Self {
        Self::new("parameter", message)
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self::new("io", format!("{}: {err}", path.display()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": { "code": self.code, "message": self.message } })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        let code = match e {
            GroupError::Parameter(_) => "parameter",
            GroupError::Format(_) | GroupError::Table(_) => "format",
            _ => "group",
        };
        Self::new(code, e.to_string())
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Group(g) => g.into(),
            GraphError::Parameter(m) => Self::parameter(m),
            GraphError::Connection(_) => Self::new("connection", e.to_string()),
            other => Self::new("format", other.to_string()),
        }
    }
}

impl From<FlowError> for CliError {
    fn from(e: FlowError) -> Self {
        match e {
            FlowError::Capacity { .. } => Self::new("capacity", e.to_string()),
            FlowError::Parameter(_) => Self::new("parameter", e.to_string()),
            FlowError::EdgeMismatch(_) => Self::new("mismatch", e.to_string()),
            FlowError::Graph(g) => g.into(),
            other => Self::new("flow", other.to_string()),
        }
    }
}

impl From<PseudoforestError> for CliError {
    fn from(e: PseudoforestError) -> Self {
        match e {
            PseudoforestError::Capacity { .. } => Self::new("capacity", e.to_string()),
            PseudoforestError::Flow(f) => f.into(),
            PseudoforestError::Graph(g) => g.into(),
            other => Self::new("certificate", other.to_string()),
        }
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::Group(g) => g.into(),
            ConstructionError::Graph(g) => g.into(),
            ConstructionError::Flow(f) => f.into(),
            ConstructionError::Pseudoforest(p) => p.into(),
            ConstructionError::Unsupported(_) => Self::parameter(e.to_string()),
            other => Self::new("construction", other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::new("format", e.to_string())
    }
}
