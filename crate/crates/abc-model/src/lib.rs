//! Simulator and exact-analytics toolkit for the ABC interacting-particle
//! model on a ring in the strongly asymmetric (zero-temperature) regime.
//!
//! The crate has three layers:
//!
//! * microscopic: ring configurations, swap dynamics, energy, and the special
//!   configuration families ([`ring`], [`families`], [`bfs`], [`kmc`]);
//! * exact analytics: the absorbing ideal chain among metastable
//!   configurations, its absorption probabilities, limiting trace rates and
//!   the ballistic velocity ([`ideal`], [`velocity`], [`statespace`]);
//! * statistics: trajectory functionals and estimators that compare
//!   simulation against the exact values ([`observables`], [`estimators`]).
//!
//! Replica-level Monte Carlo loops run on rayon when the `parallel` feature
//! (default) is enabled; sequential variants are always available.

pub mod bfs;
pub mod comb;
pub mod estimators;
pub mod experiments;
pub mod families;
pub mod ideal;
pub mod kmc;
pub mod linalg;
pub mod observables;
pub mod ring;
pub mod statespace;
pub mod velocity;

mod exec;

pub use exec::replica_map;
pub use families::{recognize, ConfigId};
pub use ring::{EdgeClass, ModelParams, RingConfig, Species};

/// Error type for fallible model operations.
#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("state-space guard violated: {0}")]
    GuardViolation(String),
    #[error("no uncensored samples")]
    AllCensored,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;
