use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),

    #[error("graph is disconnected: {reached} of {n} vertices reachable from vertex 0")]
    Disconnected { reached: usize, n: usize },

    #[error("graph with {n} vertices exceeds the size limit of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pairing model failed to produce a simple connected graph after {0} attempts")]
    RetriesExhausted(usize),

    #[error("graph is not strongly regular")]
    NotStronglyRegular,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("time parameter mismatch: {expected} vs {found}")]
    TimeMismatch { expected: f64, found: f64 },

    #[error("negative time parameter {0}")]
    NegativeTime(f64),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("window must be nonzero")]
    ZeroWindow,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short stable identifier used as the machine-readable prefix on CLI errors.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyGraph
            | Error::SelfLoop(_)
            | Error::VertexOutOfRange(..)
            | Error::Disconnected { .. }
            | Error::TooLarge { .. }
            | Error::NotStronglyRegular => "graph",
            Error::InvalidParameter(_) | Error::NegativeTime(_) | Error::ZeroWindow => "param",
            Error::RetriesExhausted(_) => "retries",
            Error::DimensionMismatch { .. } | Error::IndexOutOfRange { .. } => "dimension",
            Error::TimeMismatch { .. } => "time",
            Error::NonFinite(_) | Error::NotSymmetric(_) | Error::NoConvergence { .. } => "numeric",
            Error::Parse(_) | Error::Json(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
