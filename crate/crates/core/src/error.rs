use thiserror::Error;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    InvalidInput,
    Resource,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("no primitive {k}-th root of unity in F_{q}: {k} does not divide {q} - 1")]
    NoRootOfUnity { k: u64, q: u64 },
    #[error("characteristic {p} is not supported: {reason}")]
    UnsupportedCharacteristic { p: u64, reason: &'static str },
    #[error("x^2 - x + 5 does not split over F_{q}")]
    NotSplit { q: u64 },
    #[error("quadrics are linearly dependent (rank {rank} < 3)")]
    DependentQuadrics { rank: usize },
    #[error("enumeration needs {needed} steps, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("group closure exceeded {max_order} elements")]
    ClosureTooLarge { max_order: usize },
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("corrupt checkpoint{}: {reason}", chunk_id.map(|c| format!(" at chunk {c}")).unwrap_or_default())]
    CorruptCheckpoint { chunk_id: Option<u64>, reason: String },
    #[error("checkpoint i/o: {0}")]
    Io(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::BudgetExceeded { .. }
            | Error::ClosureTooLarge { .. }
            | Error::CorruptCheckpoint { .. }
            | Error::Io(_) => ErrorKind::Resource,
            Error::Indeterminate(_) => ErrorKind::Indeterminate,
            _ => ErrorKind::InvalidInput,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
