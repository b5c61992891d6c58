//! Sampling-overhead analysis for quasi-probability quantum error mitigation.
//!
//! The crate models small quantum channels (one or two logical qubits) as
//! Pauli transfer matrices, computes the quasi-probability decomposition that
//! inverts a noisy operation over a basis of implementable operations, and
//! reports the resulting sampling overhead factor together with analytic
//! bounds, twirling transforms, coded-scheme trade-offs and a Monte-Carlo
//! estimator that validates the predicted variance amplification.

pub mod basis;
pub mod bounds;
pub mod channel;
pub mod coded;
pub mod descriptor;
pub mod error;
pub mod gates;
pub mod pauli;
pub mod qp;
pub mod random;
pub mod sim;
pub mod twirl;

pub use error::{QemError, Result};
