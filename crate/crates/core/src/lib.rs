//! Simulation and query-complexity analytics for retrieving *every* marked
//! state of an unsorted database with exact (phase-matched) amplitude
//! amplification.
//!
//! The crate is layered:
//!
//! * [`search`] simulates one exact search run over `N` states with `m`
//!   marked states, either on the full statevector or on the two-dimensional
//!   invariant subspace.
//! * [`driver`] repeats runs until all marked states are recalled, either
//!   under a per-step retry budget or without a bound.
//! * [`analytics`] evaluates the closed-form run and query totals, the
//!   figure curves and the duality-computer query count.
//! * [`montecarlo`] batches trials deterministically and checks the
//!   statistics against the closed forms.
//! * [`cli`] is the command-line surface and the CSV/JSON emitters.

pub mod analytics;
pub mod cli;
pub mod driver;
mod error;
pub mod montecarlo;
mod problem;
pub mod rng;
pub mod search;
mod sum;

pub use error::{Error, Result};
pub use problem::ProblemInstance;
pub use sum::NeumaierSum;
