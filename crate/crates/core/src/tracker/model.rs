use rand::Rng;

use crate::error::Result;
use crate::gaussian::Gaussian;
use crate::motion::NcvModel;
use crate::rfs::{labeled_transition_log_density, Label, LabeledSet, LabeledState, LmbParams};

/// Labeled multi-Bernoulli birth process with identical components.
#[derive(Debug, Clone)]
pub struct BirthModel {
    pub existence: f64,
    pub density: Gaussian,
    pub labels_per_step: u32,
}

impl BirthModel {
    /// Birth labels `(k, 0..labels_per_step)`.
    pub fn labels(&self, k: u32) -> impl Iterator<Item = Label> {
        (0..self.labels_per_step).map(move |i| Label::new(k, i))
    }

    /// Birth density on the labels born at `k`.
    pub fn at(&self, k: u32) -> Result<LmbParams<Gaussian>> {
        let mut p = LmbParams::new();
        for l in self.labels(k) {
            p.insert(l, self.existence, self.density.clone())?;
        }
        Ok(p)
    }
}

/// Labeled multi-target Markov transition with constant survival
/// probability.
#[derive(Debug, Clone)]
pub struct TransitionModel {
    pub motion: NcvModel,
    pub p_s: f64,
    pub birth: BirthModel,
}

impl TransitionModel {
    /// `ln f(x_next | x_prev)` given the birth density at this step.
    pub fn log_density(&self, x_next: &LabeledSet, x_prev: &LabeledSet, birth_k: &LmbParams<Gaussian>) -> f64 {
        let p_s = self.p_s;
        labeled_transition_log_density(
            x_prev,
            x_next,
            |_| p_s,
            |x, prev| self.motion.log_transition_pdf(x, prev.x.as_slice()),
            birth_k,
        )
    }

    /// Draw from the transition: one uniform per previous target (survival),
    /// then its kinematics; then one uniform per birth label and its state.
    pub fn sample<R: Rng + ?Sized>(&self, x_prev: &LabeledSet, k: u32, rng: &mut R) -> Result<LabeledSet> {
        let mut out = Vec::with_capacity(x_prev.len() + 1);
        for e in x_prev {
            let u: f64 = rng.random();
            if u < self.p_s {
                out.push(LabeledState::new(self.motion.sample_transition(e.x.as_slice(), rng)?, e.label));
            }
        }
        for l in self.birth.labels(k) {
            let u: f64 = rng.random();
            if u < self.birth.existence {
                out.push(LabeledState::new(self.birth.density.sample(rng), l));
            }
        }
        Ok(LabeledSet::from_sorted_unchecked(out))
    }
}
