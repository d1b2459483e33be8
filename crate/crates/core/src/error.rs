use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied an argument outside the operation's domain of definition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A numeric formula was evaluated outside its domain (log of zero, etc).
    #[error("domain error{}: {message}", sample_suffix(*.sample))]
    Domain {
        sample: Option<usize>,
        message: String,
    },

    #[error("degenerate fit for feature `{feature}`: {reason}")]
    DegenerateFit { feature: String, reason: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("format error: {0}")]
    Format(String),

    /// The object is not in a state that supports the requested operation.
    #[error("state error: {0}")]
    State(String),

    #[error("detection error: {0}")]
    Detection(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

fn sample_suffix(sample: Option<usize>) -> String {
    match sample {
        Some(i) => format!(" (sample {i})"),
        None => String::new(),
    }
}

impl Error {
    /// Process exit status for command-line use: 1 for bad arguments, 2 for
    /// data, format and I/O problems, 3 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Argument(_) => 1,
            Error::Parse { .. } | Error::Format(_) | Error::State(_) | Error::Io(_) => 2,
            Error::Domain { .. } | Error::DegenerateFit { .. } | Error::Detection(_) => 3,
        }
    }

    pub fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain {
            sample: None,
            message: msg.into(),
        }
    }

    pub(crate) fn degenerate(feature: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::DegenerateFit {
            feature: feature.into(),
            reason: reason.into(),
        }
    }

    /// Attach a sample index to a domain error; other variants pass through.
    pub(crate) fn at_sample(self, index: usize) -> Self {
        match self {
            Error::Domain { message, .. } => Error::Domain {
                sample: Some(index),
                message,
            },
            other => other,
        }
    }

    /// Relabel a degenerate-fit error with the feature it came from.
    pub(crate) fn for_feature(self, name: &str) -> Self {
        match self {
            Error::DegenerateFit { reason, .. } => Error::DegenerateFit {
                feature: name.to_string(),
                reason,
            },
            other => other,
        }
    }
}
