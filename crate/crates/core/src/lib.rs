//! Test-score team selection for contest-structured performance measures.
//!
//! A team drawn from a pool of stochastic candidates is scored by the
//! expected sum of the `h` best realized contributions among its `k`
//! members. This crate provides:
//!
//! - exact and Monte Carlo evaluation of that team value for independent
//!   pools, plus evaluation over explicit dependent sample spaces
//!   ([`team`]);
//! - the three isolated test scores (expectation, potential, conditional
//!   quantile) and the quantile machinery behind them ([`rv`]);
//! - selection procedures: top-k by score, greedy hill-climbing, brute
//!   force, and the exactly-optimal greedy for weighted Bernoulli pools
//!   ([`select`]);
//! - adversarial constructions showing that no test score works for
//!   coverage or induced-edge objectives, the tight instance for the
//!   canonical test, and the Set Cover hardness reduction ([`adversary`]);
//! - randomized suites verifying the structural claims the guarantees rest
//!   on ([`analysis`]).

pub mod adversary;
pub mod analysis;
mod error;
pub mod rv;
pub mod select;
pub mod team;

pub use error::{Error, Result};
pub use rv::{Candidate, DiscreteRv, QuantileSplit, WeightedBernoulli};
pub use select::{Method, SelectionReport};
pub use team::{DependentEnsemble, TeamInstance};

/// Absolute tolerance for inequality checks and value comparisons.
pub const TOL: f64 = 1e-9;
