use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {requested} exceeds the configured maximum {max}")]
    Capacity { requested: usize, max: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("norm drifted to {norm} after applying an operator")]
    NumericalHealth { norm: f64 },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("post-selected branch has probability {probability:e}")]
    PostSelectionImpossible { probability: f64 },

    #[error("non-finite result: {0}")]
    Overflow(String),

    #[error("outside the admissible domain: {0}")]
    Domain(String),

    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    #[error("protocol infeasible: {0}")]
    ProtocolInfeasible(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Capacity { .. } => "CapacityError",
            Error::Shape(_) => "ShapeError",
            Error::NumericalHealth { .. } => "NumericalHealthError",
            Error::Contract(_) => "ContractError",
            Error::PostSelectionImpossible { .. } => "PostSelectionImpossible",
            Error::Overflow(_) => "OverflowError",
            Error::Domain(_) => "DomainError",
            Error::DegenerateConfiguration(_) => "DegenerateConfigurationError",
            Error::ProtocolInfeasible(_) => "ProtocolInfeasibleError",
            Error::Parse { .. } => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
