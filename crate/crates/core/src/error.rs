use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cannot take the hull of an empty point set")]
    EmptyPointSet,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("model '{0}' has no decomposition function")]
    MissingDecomposition(String),

    #[error("model '{0}' has no growth dynamics")]
    MissingGrowth(String),

    #[error("model '{0}' is not input-affine and its input box has nonzero width")]
    NotInputAffine(String),

    #[error("non-finite value at step {step}, component {component}")]
    NonFinite { step: usize, component: usize },

    #[error("sample {sample}: {source}")]
    Sample {
        sample: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("lower bound exceeds upper bound at t = {time}, component {component}")]
    OrderViolation { time: f64, component: usize },

    #[error("negative radius {value:e} at t = {time}, component {component}")]
    NegativeRadius {
        time: f64,
        component: usize,
        value: f64,
    },

    #[error("out of memory: need {bytes} bytes")]
    OutOfMemory { bytes: u64 },

    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("thread pool: {0}")]
    ThreadPool(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable category used as the CLI diagnostic prefix.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Config { .. } => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::OutOfMemory { .. } => "memory",
            Error::Context { source, .. } => source.kind(),
            Error::InvalidParameter(_) | Error::InvalidModel(_) => "model",
            Error::InvalidInterval(_)
            | Error::DimensionMismatch { .. }
            | Error::EmptyPointSet
            | Error::InvalidProblem(_) => "input",
            _ => "method",
        }
    }

    pub fn with_context(self, context: impl Into<String>) -> Error {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    pub(crate) fn config(line: usize, message: impl Into<String>) -> Error {
        Error::Config {
            line,
            message: message.into(),
        }
    }
}
