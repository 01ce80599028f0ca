use thiserror::Error;

/// Errors produced by the simulator and its front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlockError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(
        "initialization failed: could not place {placed}/{wanted} agents after {attempts} attempts"
    )]
    InitFailure {
        placed: usize,
        wanted: usize,
        attempts: usize,
    },

    #[error("agents {0} and {1} are coincident")]
    CoincidentAgents(usize, usize),

    #[error("degenerate displacement: zero-length vector")]
    ZeroDisplacement,

    #[error("non-finite control action for agent {0}")]
    NonFiniteAction(usize),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("unknown controller {0:?} (expected one of: local, global, none)")]
    UnknownController(String),

    #[error("at step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<FlockError>,
    },

    #[error("{0}")]
    Io(String),
}

impl FlockError {
    /// Attach the step index at which the error surfaced.
    pub fn at_step(self, step: usize) -> Self {
        match self {
            e @ FlockError::AtStep { .. } => e,
            e => FlockError::AtStep {
                step,
                source: Box::new(e),
            },
        }
    }
}

impl From<std::io::Error> for FlockError {
    fn from(e: std::io::Error) -> Self {
        FlockError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for FlockError {
    fn from(e: serde_json::Error) -> Self {
        FlockError::Io(format!("json: {e}"))
    }
}

impl From<csv::Error> for FlockError {
    fn from(e: csv::Error) -> Self {
        FlockError::Io(format!("csv: {e}"))
    }
}

pub type Result<T, E = FlockError> = std::result::Result<T, E>;
