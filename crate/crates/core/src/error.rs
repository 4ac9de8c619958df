use thiserror::Error;

/// Errors produced by the computational modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("group too large: closure exceeded the cap of {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("{what} of size {size} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("group is not transitive ({orbits} orbits)")]
    NotTransitive { orbits: usize },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("latin square row {row} is not realizable in the group")]
    RowNotInGroup { row: usize },

    #[error("relation check failed: {0}")]
    RelationBroken(String),

    #[error("not projectively closed: |tr(g_kl* g_k g_l)| = {modulus} at k = {k}, l = {l}")]
    NotProjectivelyClosed { k: usize, l: usize, modulus: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Coarse classification used by front ends to choose exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    ResourceCap,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::GroupTooLarge { .. } | Error::CapExceeded { .. } => ErrorKind::ResourceCap,
            _ => ErrorKind::Input,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
