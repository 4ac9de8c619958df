pub mod group;
pub mod hadamard;
pub mod model;
pub mod suite;
pub mod weyl;
