use std::fmt;
use std::io;
use std::path::PathBuf;

/// Errors from reading, validating or writing documents.
#[derive(Debug)]
pub enum DocError {
    /// The text is not valid JSON or a field has the wrong shape.
    Json { path: String, message: String },
    /// A tag field holds an unknown value.
    UnknownTag { path: String, value: String, expected: &'static str },
    /// The values parse but violate a game invariant.
    Invalid { path: String, source: approxeq_core::Error },
    /// A required field is missing for this combination of options.
    Missing { path: String, reason: &'static str },
    /// File system failure.
    Io { path: PathBuf, source: io::Error },
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocError::Json { path, message } => write!(f, "at `{path}`: {message}"),
            DocError::UnknownTag { path, value, expected } => {
                write!(f, "at `{path}`: unknown value {value:?}, expected one of {expected}")
            }
            DocError::Invalid { path, source } => write!(f, "at `{path}`: {source}"),
            DocError::Missing { path, reason } => write!(f, "at `{path}`: missing field, {reason}"),
            DocError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

// the source is already part of the message, so it is not exposed again
impl std::error::Error for DocError {}

pub(crate) fn invalid(path: &str) -> impl FnOnce(approxeq_core::Error) -> DocError + '_ {
    move |source| DocError::Invalid { path: path.to_string(), source }
}
