//! Multi-target particle filter on labeled sets.

mod config;
mod filter;
mod model;
mod particles;
mod weights;

pub use config::{FilterConfig, ProposalKind, TrackerConfig, VovoWeightMode};
pub use filter::{StepOutput, Tracker};
pub use model::{BirthModel, TransitionModel};
pub use particles::{
    effective_sample_size, estimate, normalize_log_weights, resample, systematic_indices, LabelEstimate,
    MultiTargetParticle, TrackEstimate, TrackerState,
};
pub use weights::{propagate, Propagated, StepProposal};
