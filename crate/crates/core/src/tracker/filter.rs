use crate::error::Result;
use crate::proposal::{build_lmb, build_vovo};
use crate::rng::resample_stream;
use crate::sacphd::{self, CardinalityDistribution, FilterDiagnostics, PhdParticleCloud};
use crate::sensor::SuperpositionalSensor;

use super::weights::{propagate, StepProposal};
use super::{
    effective_sample_size, estimate, normalize_log_weights, resample, MultiTargetParticle, ProposalKind, TrackEstimate,
    TrackerConfig, TrackerState, TransitionModel,
};

/// Everything produced by one tracker step.
#[derive(Debug, Clone)]
pub struct StepOutput {
    pub estimate: TrackEstimate,
    /// Effective sample size of the weights before resampling.
    pub n_eff: f64,
    pub support_violations: usize,
    pub incompatible: usize,
    /// Auxiliary filter summary; absent for the bootstrap proposal.
    pub filter: Option<FilterDiagnostics>,
}

/// Multi-target particle filter driven by the auxiliary approximate CPHD
/// filter.
///
/// Each step re-seeds the auxiliary filter from the current particles,
/// predicts and updates it with the new scan, turns the updated PHD into
/// per-label clusters, builds the configured proposal, propagates and
/// weights every particle, estimates, and resamples.
pub struct Tracker<'s, S: SuperpositionalSensor> {
    sensor: &'s S,
    model: TransitionModel,
    cfg: TrackerConfig,
    state: TrackerState,
}

impl<'s, S: SuperpositionalSensor> Tracker<'s, S> {
    pub fn new(sensor: &'s S, model: TransitionModel, cfg: TrackerConfig) -> Result<Self> {
        cfg.validate()?;
        let state = TrackerState::empty(cfg.n_particles);
        Ok(Self { sensor, model, cfg, state })
    }

    /// Start from a given particle set instead of the empty set.
    pub fn with_state(sensor: &'s S, model: TransitionModel, cfg: TrackerConfig, state: TrackerState) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { sensor, model, cfg, state })
    }

    pub fn state(&self) -> &TrackerState {
        &self.state
    }

    pub fn config(&self) -> &TrackerConfig {
        &self.cfg
    }

    /// Process the scan at time `state.k + 1`.
    pub fn step(&mut self, z: &S::Measurement) -> Result<StepOutput> {
        let k = self.state.k + 1;
        let seed = self.cfg.seed;
        let birth_k = self.model.birth.at(k)?;
        let prev = &self.state.particles;

        let (diag, lmb, vovo) = match self.cfg.proposal {
            ProposalKind::Transition => (None, None, None),
            kind => {
                let f = &self.cfg.filter;
                let card = CardinalityDistribution::from_sizes(prev.iter().map(|p| (p.set.len(), p.weight)), f.n_max);
                let cloud = PhdParticleCloud::from_multi_target(prev.iter().map(|p| (&p.set, p.weight)));
                let (card, cloud) = sacphd::predict(
                    &card,
                    &cloud,
                    self.model.p_s,
                    &birth_k,
                    f.n_birth_particles,
                    &self.model.motion,
                    seed,
                    k,
                )?;
                let z_add = self.sensor.additive_measurement(z);
                let sensor = self.sensor;
                let up = sacphd::update(
                    &card,
                    &cloud,
                    &z_add,
                    |x| sensor.gamma(x),
                    f.noise_std * f.noise_std,
                    f.rescale_phd_mass,
                )?;
                let clusters = sacphd::extract_clusters(&up.cloud, k, &f.clamps, f.cov_floor)?;
                let diag = FilterDiagnostics::new(k, &up.card, &clusters);
                if kind == ProposalKind::Lmb {
                    (Some(diag), Some(build_lmb(clusters)?), None)
                } else {
                    let mut universe = self.state.label_universe();
                    universe.extend(self.model.birth.labels(k));
                    (Some(diag), None, Some(build_vovo(&up.card, &clusters, &universe)?))
                }
            }
        };
        let proposal = match (&lmb, &vovo) {
            (Some(q), _) => StepProposal::Lmb(q),
            (_, Some(q)) => StepProposal::Vovo(q, self.cfg.vovo_weight_mode),
            _ => StepProposal::Transition,
        };

        let out = propagate(prev, z, self.sensor, &self.model, &birth_k, proposal, seed, k)?;
        let w = normalize_log_weights(&out.log_weights, k)?;
        let weighted: Vec<MultiTargetParticle> =
            out.sets.into_iter().zip(w).map(|(set, weight)| MultiTargetParticle { set, weight }).collect();
        let n_eff = effective_sample_size(weighted.iter().map(|p| p.weight));
        let est = estimate(&weighted, k);
        let mut rng = resample_stream(seed, k);
        let particles = resample(&weighted, self.cfg.n_particles, &mut rng);
        self.state = TrackerState { particles, k };
        Ok(StepOutput {
            estimate: est,
            n_eff,
            support_violations: out.support_violations,
            incompatible: out.incompatible,
            filter: diag,
        })
    }
}
