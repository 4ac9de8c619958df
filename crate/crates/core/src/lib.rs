pub mod error;
pub mod hadamard;
pub mod linalg;
pub mod magic;
pub mod model;
pub mod perm;
pub mod random;
pub mod report;
pub mod suite;
pub mod weyl;

pub use error::{Error, ErrorKind, Result};
