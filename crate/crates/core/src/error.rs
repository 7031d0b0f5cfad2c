use thiserror::Error;

/// Errors raised by the hexafield library.
///
/// [`Error::Capacity`] is kept separate from the domain errors so callers
/// (notably the CLI) can tell "input too large for the configured caps"
/// apart from "input is wrong".
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} = {value} exceeds the configured cap of {cap}")]
    Capacity {
        what: &'static str,
        value: u64,
        cap: u64,
    },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("element {element:?} does not belong to group {group}")]
    InvalidElement { element: Vec<u32>, group: String },
    #[error("unit {0:?} does not square to the identity")]
    InvalidUnit(Vec<u32>),
    #[error("elements belong to different groups")]
    MismatchedGroup,
    #[error("map is not a group homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("index {index} does not divide q - 1 = {order}")]
    NotDivisor { index: u64, order: u64 },
    #[error("pasture is not a hyperfield")]
    NotHyperfield,
    #[error("unit is not a central involution")]
    NotCentral,
    #[error("unknown event label {0:?}")]
    UnknownEvent(String),
    #[error("invalid linear system: {0}")]
    InvalidSystem(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }

    pub(crate) fn capacity(what: &'static str, value: usize, cap: usize) -> Self {
        Error::Capacity {
            what,
            value: value as u64,
            cap: cap as u64,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
