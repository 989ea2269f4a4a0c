use crate::ntkernel::Natural;

/// Errors raised by the primality routines.
///
/// A verdict (prime, composite, inapplicable) is never an error; these are
/// reserved for violated preconditions and searches that ran out of room.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not applicable: {0}")]
    Inapplicable(String),

    #[error("no base a in [2, {cap}] has Jacobi symbol -1 modulo {n}")]
    WitnessExhausted { n: Natural, cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
