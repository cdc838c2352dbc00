use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Input violates a precondition (bad length, zero vector, unknown mode, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// Two objects built over different rings or spaces were combined.
    #[error("structure mismatch: {0}")]
    Mismatch(String),

    /// The strategic state is orthogonal to every prospect in the lattice.
    #[error("degenerate lattice: {0}")]
    DegenerateLattice(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
