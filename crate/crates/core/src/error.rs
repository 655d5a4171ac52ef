use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// No AoI refresh can ever happen (for instance `rho * omega == 0`), so
    /// the average age is infinite.
    #[error("degenerate process: {0}")]
    DegenerateProcess(String),

    #[error("improper distribution: G(1) = {0}")]
    ImproperDistribution(f64),

    #[error("generating function has a pole at x = 1")]
    PoleAtOne,

    #[error("no path from `{src}` to `{sink}`")]
    NoPath { src: String, sink: String },

    #[error("unknown vertex or state `{0}`")]
    UnknownLabel(String),

    #[error("argument {0} outside the domain [-1/e, inf)")]
    Domain(f64),

    #[error("target {0} is not bracketed by the attainable range")]
    NonBracketed(f64),

    #[error("iteration did not converge: {0}")]
    Convergence(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DegenerateProcess(_) | Error::ImproperDistribution(_) | Error::PoleAtOne => 3,
            Error::Inconsistent(_) => 4,
            Error::Convergence(_) | Error::NoPath { .. } => 4,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
