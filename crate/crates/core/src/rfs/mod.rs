//! Labels, labeled sets and labeled multi-target densities.

mod density;
mod esf;
mod label;
mod set;
mod transition;

pub use density::{lmb_log_density, LmbComponent, LmbParams, SingleTargetDensity, VovoSingleTerm};
pub use esf::{elementary_symmetric, suffix_esf_table};
pub use label::Label;
pub use set::{distinct_label_indicator, multi_object_exponential, LabeledSet, LabeledState};
pub use transition::labeled_transition_log_density;
