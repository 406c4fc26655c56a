use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rfs::{Label, LabeledSet, LabeledState};
use crate::sacphd::{ClusterKind, GaussianCluster};

/// Labeled multi-Bernoulli proposal: survival components keyed by
/// previously existing labels and birth components keyed by new labels.
#[derive(Debug, Clone, Default)]
pub struct LmbProposal {
    pub survival: BTreeMap<Label, GaussianCluster>,
    pub birth: BTreeMap<Label, GaussianCluster>,
}

/// Package clusters into an LMB proposal.
pub fn build_lmb(clusters: impl IntoIterator<Item = GaussianCluster>) -> Result<LmbProposal> {
    let mut prop = LmbProposal::default();
    for c in clusters {
        let label = c.label;
        if prop.survival.contains_key(&label) || prop.birth.contains_key(&label) {
            return Err(Error::DuplicateLabel(label));
        }
        match c.kind {
            ClusterKind::Survival => prop.survival.insert(label, c),
            ClusterKind::Birth => prop.birth.insert(label, c),
        };
    }
    Ok(prop)
}

impl LmbProposal {
    /// Draw a labeled set given the particle's previous set. Each previous
    /// label with a survival cluster is kept with probability equal to the
    /// cluster mass; each birth label is included with its mass.
    pub fn sample<R: Rng + ?Sized>(&self, x_prev: &LabeledSet, rng: &mut R) -> LabeledSet {
        let mut out = Vec::with_capacity(x_prev.len() + self.birth.len());
        let candidates = x_prev.labels().filter_map(|l| self.survival.get(&l)).chain(self.birth.values());
        for c in candidates {
            let u: f64 = rng.random();
            if u < c.mass {
                out.push(LabeledState::new(c.density.sample(rng), c.label));
            }
        }
        // previous labels precede birth labels, both in order
        LabeledSet::from_sorted_unchecked(out)
    }

    /// `ln q(x_new | x_prev)`; `-inf` outside the proposal support.
    pub fn log_q(&self, x_new: &LabeledSet, x_prev: &LabeledSet) -> f64 {
        let mut total = 0.0;
        let mut used = 0;
        let survivors = x_prev.labels().filter_map(|l| self.survival.get(&l));
        for c in survivors.chain(self.birth.values()) {
            match x_new.get(c.label) {
                Some(e) => {
                    total += c.mass.ln() + c.density.log_pdf(e.x.as_slice());
                    used += 1;
                }
                None => total += (1.0 - c.mass).ln(),
            }
        }
        if used != x_new.len() {
            return f64::NEG_INFINITY;
        }
        total
    }

    pub fn len(&self) -> usize {
        self.survival.len() + self.birth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
