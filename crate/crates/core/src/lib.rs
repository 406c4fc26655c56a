//! Labeled random finite set tracking for superpositional sensors.
//!
//! A multi-target particle filter on labeled sets whose importance
//! proposals are built from an auxiliary approximate CPHD filter, together
//! with a radar power-return sensor model, a Monte Carlo harness and OSPA
//! metrics.

pub mod error;
pub mod exec;
pub mod gaussian;
pub mod metrics;
pub mod motion;
pub mod proposal;
pub mod radar;
pub mod rfs;
pub mod rng;
pub mod sacphd;
pub mod sensor;
pub mod sim;
pub mod tracker;

pub use error::{Error, Result};
