//! Solver library for undiscounted finite-horizon Ramsey problems, their
//! infinite-horizon limits, and numerical certification that the limit path
//! is overtaking-optimal.
//!
//! The parametric baseline is log utility with Cobb-Douglas production
//! f(k) = k^α on (0,1), where every quantity has a closed form; the
//! shooting and dynamic-programming solvers work against the abstract
//! [`model::Primitives`] contract.

pub mod asymptotics;
pub mod error;
pub mod export;
pub mod liminf;
pub mod model;
pub mod overtaking;
pub mod solver;

pub use error::{Error, Result};
pub use model::{FinitePath, ModelSpec, Primitives};
