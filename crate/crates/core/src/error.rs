use thiserror::Error;

use crate::poly::{CapExceeded, PolyError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("construction infeasible: {0}")]
    Infeasible(String),
    #[error("resource cap exceeded ({:?}) after {:?}", .0.kind, .0.elapsed)]
    Capped(CapExceeded),
}

impl From<PolyError> for Error {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::Usage(s) => Error::Usage(s),
            PolyError::Capped(c) => Error::Capped(c),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}
