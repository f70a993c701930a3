//! Error type shared by every module.

use alloc::string::String;
use core::fmt;

/// Failure modes of the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `D` outside `{1, 2, 3, 7, 11, 19, 43, 67, 163}`.
    UnsupportedField(i64),
    /// Arguments violate a documented precondition.
    InvalidInput(String),
    /// A pair that was required to be coprime is not.
    NotCoprime,
    /// A truncation certificate could not be established.
    Certificate(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnsupportedField(d) => {
                write!(f, "D = {d} is not one of 1, 2, 3, 7, 11, 19, 43, 67, 163")
            }
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::NotCoprime => f.write_str("pair is not coprime"),
            Error::Certificate(msg) => write!(f, "certificate failure: {msg}"),
        }
    }
}

#[cfg(feature = "parallel")]
impl std::error::Error for Error {}

/// Shorthand result type.
pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
