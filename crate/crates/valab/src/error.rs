use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A caller-side contract was not met (e.g. missing derivatives).
    #[error("contract error: {0}")]
    Contract(String),
    /// A numerical procedure failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// The requested dimension is above the supported cap.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
pub(crate) use domain;
