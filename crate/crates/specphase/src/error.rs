use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A requested graph cannot exist (parity or simplicity constraints).
    #[error("infeasible graph specification: {0}")]
    Infeasible(String),

    /// The generator exhausted its retry budget.
    #[error("graph generation failed: {0}")]
    Generation(String),

    /// Invalid user-supplied parameter.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// An iterative solver did not reach the requested tolerance.
    #[error("convergence failure: {0} (best residual {residual:.3e})", residual = .1)]
    Convergence(String, f64),

    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// All candidate EMA phases are infeasible at the query point.
    #[error("EMA solver error: {0}")]
    Solver(String),

    /// Zero vector where a direction is required.
    #[error("degenerate vector: {0}")]
    DegenerateVector(String),

    /// Normalized cut of the unpartitioned (zero-volume) labeling.
    #[error("singular partition: {0}")]
    SingularPartition(String),

    /// Exhaustive enumeration requested beyond the supported size.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl Error {
    /// Process exit code: 2 for usage/parameter problems, 1 for numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Infeasible(_)
            | Error::Parameter(_)
            | Error::Domain(_)
            | Error::Capacity(_)
            | Error::Parse(_)
            | Error::Io(_) => 2,
            Error::Generation(_)
            | Error::Convergence(..)
            | Error::Solver(_)
            | Error::DegenerateVector(_)
            | Error::SingularPartition(_) => 1,
        }
    }
}
