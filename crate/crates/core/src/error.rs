use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid vehicle parameters: {0}")]
    InvalidParams(String),

    #[error("mass matrix is singular")]
    SingularMassMatrix,

    #[error("azimuth {angle} rad exceeds the actuator limit of {limit} rad")]
    AzimuthOutOfRange { angle: f64, limit: f64 },

    #[error("motor command {0}% is outside [-100, 100]")]
    CommandOutOfRange(f64),

    #[error("allocation geometry is degenerate: T W^-1 T^T is not invertible")]
    DegenerateGeometry,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("integration produced a non-finite state at t = {t:.3} s (eta = {eta:?}, nu = {nu:?})")]
    NonFinite { t: f64, eta: [f64; 3], nu: [f64; 3] },

    #[error("config error in {context}: {message}")]
    Config { context: String, message: String },

    #[error("run {cell} aborted: {source}")]
    CellFailed { cell: String, source: Box<Error> },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv { path: path.into(), source }
    }

    pub(crate) fn config(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { context: context.into(), message: message.into() }
    }
}
