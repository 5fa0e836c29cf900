use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("polygon is not convex")]
    NotConvex,
    #[error("meshing failure: {0}")]
    MeshingFailure(String),
    #[error("solver failure: {0}")]
    SolverFailure(String),
    #[error("point {0:?} lies outside the meshed region")]
    OutOfDomain([f64; 2]),
    #[error("root search failure: {0}")]
    SearchFailure(String),
    #[error("integration failure: {0}")]
    IntegrationFailure(String),
    #[error("fit failure: {0}")]
    FitFailure(String),
    #[error("invalid test function: {0}")]
    InvalidTestFunction(String),
    #[error("i/o failure: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of a numerical procedure rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::MeshingFailure(_)
                | Error::SolverFailure(_)
                | Error::SearchFailure(_)
                | Error::IntegrationFailure(_)
                | Error::FitFailure(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::DomainError(msg.into()))
}
