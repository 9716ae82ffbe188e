use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested computation exceeds what this crate enumerates or stores.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// No plan meets the requested budget.
    #[error("infeasible plan: {0}")]
    Infeasible(String),

    /// A byte stream does not decode as a container.
    #[error("malformed container: {0}")]
    Format(String),

    /// A payload read fell outside the payload. Always a decoder bug.
    #[error("payload read [{offset}, {offset}+{len}) out of range for {payload_len} bits")]
    OutOfRange {
        offset: usize,
        len: usize,
        payload_len: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
