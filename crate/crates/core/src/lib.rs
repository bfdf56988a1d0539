//! Convex optimization from θ-approximate zeroth-order oracles.
//!
//! The crate emulates quantum gradient and subgradient estimation classically
//! (an exact statevector simulation of Jordan's algorithm, a statistical
//! surrogate, and a randomized-smoothing subgradient estimator), and builds
//! projected subgradient, mirror descent, dual averaging, mirror prox and
//! gradient descent solvers on top of them. White-box SDP, LP and zero-sum
//! game solvers reduce to mirror descent on an eigenvalue objective.

pub mod error;
pub mod geometry;
pub mod harness;
pub mod norms;
pub mod oracle;
pub mod par;
pub mod problem;
pub mod qgrad;
pub mod solvers;
pub mod whitebox;

pub use error::{Error, Result};
pub use norms::NormSpec;
pub use oracle::{NoiseMode, NoisyOracle};
pub use problem::{DomainSpec, ObjectiveSpec};
