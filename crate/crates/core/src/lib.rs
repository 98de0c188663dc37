//! Ollivier-Ricci curvature of graph edges computed by exact optimal
//! transport, with generators for two-community graph families, closed-form
//! bounds on intercommunity curvature and a seeded Monte-Carlo harness.

pub mod bounds;
pub mod constructions;
pub mod curvature;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod scalar;
pub mod selftest;
pub mod transport;
pub mod witness;

pub use error::{Error, Result};
pub use num_rational::BigRational;
