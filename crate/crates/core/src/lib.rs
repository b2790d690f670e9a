//! Simulation of kinetic SDEs
//!
//! ```text
//! dX_t = V_t dt,   dV_t = b(X_t, V_t) dt + dL_t,
//! ```
//!
//! driven by an isotropic α-stable Lévy process `L`, with the Γ-shifted Euler
//! scheme and a Monte Carlo harness that measures its strong convergence order
//! against a fine-grid reference on a shared noise realization.

// Negated comparisons are used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod drift;
pub mod error;
pub mod harness;
pub mod kinetic;
pub mod rng;
pub mod scheme;
pub mod stable;
pub mod stats;

#[cfg(feature = "cli")]
pub mod config;

pub use drift::{DriftKind, DriftSpec};
pub use error::{Error, Result};
pub use harness::{strong_error_experiment, theoretical_rate, ExperimentConfig, RateReport};
pub use kinetic::{MasterPath, PhasePoint};
pub use rng::RngStream;
pub use scheme::{run_euler, run_reference, Quadrature, SchemeConfig, Trajectory};
pub use stable::StableParams;
