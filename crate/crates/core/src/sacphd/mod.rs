//! Particle implementation of the superpositional approximate CPHD filter.
//!
//! The filter carries a cardinality distribution and a label-tagged particle
//! PHD. Its update uses only first and second moments of the additive
//! per-target contribution, which keeps the cost linear in the number of
//! particles. The updated PHD is summarized per label into Gaussian clusters
//! from which the tracker proposals are built.

mod cardinality;
mod cloud;
mod clusters;
pub mod moments;
mod predict;
mod update;

pub use cardinality::CardinalityDistribution;
pub use cloud::{PhdParticle, PhdParticleCloud};
pub use clusters::{extract_clusters, Clamps, ClusterKind, GaussianCluster, DEFAULT_COV_FLOOR};
pub use moments::Moments;
pub use predict::predict;
pub use update::{update, UpdateOutcome};

use serde::{Deserialize, Serialize};

use crate::rfs::Label;

/// Per-step diagnostic record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterDiagnostics {
    pub k: u32,
    pub rho: Vec<f64>,
    pub clusters: Vec<ClusterSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub label: Label,
    pub mass: f64,
    pub raw_mass: f64,
    pub mean: Vec<f64>,
    pub cov_diag: Vec<f64>,
}

impl FilterDiagnostics {
    pub fn new(k: u32, card: &CardinalityDistribution, clusters: &[GaussianCluster]) -> Self {
        Self {
            k,
            rho: card.probs().to_vec(),
            clusters: clusters
                .iter()
                .map(|c| ClusterSummary {
                    label: c.label,
                    mass: c.mass,
                    raw_mass: c.raw_mass,
                    mean: c.density.mean().iter().copied().collect(),
                    cov_diag: c.density.cov().diagonal().iter().copied().collect(),
                })
                .collect(),
        }
    }
}
