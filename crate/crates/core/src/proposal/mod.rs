//! Importance proposals on labeled sets built from the per-label clusters
//! of the approximate CPHD filter.
//!
//! * [`LmbProposal`]: independent Bernoulli components, survivors
//!   restricted to the labels of the particle being propagated.
//! * [`VovoProposal`]: a single-term generalized labeled multi-Bernoulli
//!   density whose cardinality follows the filter's cardinality distribution
//!   and whose label sets are drawn proportionally to the product of
//!   normalized cluster masses.

mod lmb;
mod vovo;

pub use lmb::{build_lmb, LmbProposal};
pub use vovo::{build_vovo, VovoProposal};
