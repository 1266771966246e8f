//! Heisenberg-picture quantum circuit simulator built on per-qubit
//! descriptors, with reduced-descriptor machinery, correlation and
//! separability analysis, and an independent dense state-vector oracle.

pub mod analysis;
pub mod circuit;
pub mod descriptor;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod pauli;
pub mod protocols;
pub mod reduction;
pub mod testkit;

pub use error::{Error, Result};
