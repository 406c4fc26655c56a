use nalgebra::DVector;

use crate::rfs::{Label, LabeledSet};

/// One weighted, label-tagged sample of the PHD.
#[derive(Debug, Clone, PartialEq)]
pub struct PhdParticle {
    pub x: DVector<f64>,
    pub weight: f64,
    pub label: Label,
}

/// Weighted particle approximation of the PHD. The total weight is the PHD
/// mass, not 1.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PhdParticleCloud {
    pub particles: Vec<PhdParticle>,
}

impl PhdParticleCloud {
    pub fn new(particles: Vec<PhdParticle>) -> Self {
        Self { particles }
    }

    /// `v(x) = sum_i sum_{l in L(X_i)} w_i delta(x; x_{i,l})`.
    pub fn from_multi_target<'a>(sets: impl IntoIterator<Item = (&'a LabeledSet, f64)>) -> Self {
        let mut particles = Vec::new();
        for (set, w) in sets {
            for e in set {
                particles.push(PhdParticle { x: e.x.clone(), weight: w, label: e.label });
            }
        }
        Self { particles }
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.particles.iter().map(|p| p.weight).sum()
    }
}
