use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The input is valid on its own but does not satisfy what the operation
    /// requires of it (e.g. a structure that is not private private).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An object failed its construction invariants.
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    /// A brute-force or LP computation exceeded its documented size budget.
    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("linear program is {0}")]
    Lp(&'static str),

    #[error("malformed input: field `{field}`: {reason}")]
    Parse { field: String, reason: String },
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }

    pub(crate) fn parse(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
