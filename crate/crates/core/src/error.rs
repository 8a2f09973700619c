use thiserror::Error;

/// Errors raised by the computational routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the region where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A brute-force routine was asked for more than its enumeration guard allows.
    #[error("enumeration guard: {what} = {value} exceeds {limit}")]
    Guard {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    /// An iterative scheme hit its cap before meeting the tolerance.
    #[error("no convergence: {0}")]
    NonConvergence(String),

    /// A numerical consistency check inside a routine failed.
    #[error("conditioning failure: {0}")]
    Conditioning(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
