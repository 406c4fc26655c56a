use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sacphd::{Clamps, DEFAULT_COV_FLOOR};

/// Importance proposal used by the tracker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ProposalKind {
    /// Labeled multi-Bernoulli proposal conditioned on each particle.
    Lmb,
    /// Single-term generalized labeled multi-Bernoulli proposal.
    #[default]
    Vovo,
    /// The transition density itself (bootstrap filter).
    Transition,
}

/// How the transition term of the marginal importance weight is evaluated
/// under the Vo-Vo proposal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum VovoWeightMode {
    /// Weighted sum over all previous particles.
    FullSum,
    /// One previous particle drawn uniformly among those whose labels cover
    /// the surviving labels of the new particle.
    #[default]
    SingleParticle,
}

/// Settings of the auxiliary approximate CPHD filter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    /// PHD particles drawn per birth label and step.
    pub n_birth_particles: usize,
    /// Largest cardinality represented.
    pub n_max: usize,
    pub clamps: Clamps,
    /// Diagonal floor added to cluster covariances.
    pub cov_floor: f64,
    /// Standard deviation of the Gaussian noise of the additive measurement.
    pub noise_std: f64,
    /// Scale the updated PHD mass to the updated mean cardinality.
    pub rescale_phd_mass: bool,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            n_birth_particles: 5000,
            n_max: 11,
            clamps: Clamps::default(),
            cov_floor: DEFAULT_COV_FLOOR,
            noise_std: 2.0,
            rescale_phd_mass: false,
        }
    }
}

/// Tracker settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackerConfig {
    pub n_particles: usize,
    pub proposal: ProposalKind,
    pub vovo_weight_mode: VovoWeightMode,
    pub seed: u64,
    pub filter: FilterConfig,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            n_particles: 3000,
            proposal: ProposalKind::Vovo,
            vovo_weight_mode: VovoWeightMode::SingleParticle,
            seed: 0,
            filter: FilterConfig::default(),
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_particles == 0 {
            return Err(Error::Config("n_particles must be positive".into()));
        }
        if !(self.filter.noise_std > 0.0) {
            return Err(Error::Config("noise_std must be positive".into()));
        }
        if self.filter.n_max == 0 {
            return Err(Error::Config("n_max must be positive".into()));
        }
        self.filter.clamps.validate()
    }
}
