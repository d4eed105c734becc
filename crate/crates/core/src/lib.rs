//! Stochastic simulation of how a new networking technology spreads over a
//! fixed network.
//!
//! Each step, every node that has not switched yet weighs the global number
//! of adopters times its adopted neighbours against its own transition cost
//! and switches with a logistic probability. The crate provides the graph
//! families the experiments use ([`graph`]), the adoption rule and the
//! synchronous step ([`dynamics`]), runs, ensembles and named presets
//! ([`simulation`]), and shape analysis of the resulting growth curves
//! ([`analysis`]).
//!
//! ```
//! use netdeploy::simulation::{preset, run};
//!
//! let mut config = preset("clique").unwrap();
//! config.rng_seed = 42;
//! let outcome = run(&config).unwrap();
//! assert!(outcome.saturated());
//! assert!(outcome.curve.last() >= 9900);
//! ```

pub mod analysis;
pub mod dynamics;
mod error;
pub mod graph;
pub mod output;
pub mod par;
pub mod simulation;

pub use error::{Error, Result};
